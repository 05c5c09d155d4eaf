#include <random>

#include "doctest.h"
#include "osig/reach.hpp"

using namespace osig;

namespace {

GameSpec corridor(double radius, double u_speed, double v_speed, int nodes, int steps) {
  CorridorParams p;
  p.nodes = nodes;
  p.steps = steps;
  p.horizon = 0.2 * steps;
  p.radius = radius;
  p.belief_count = 5;
  p.cap = 50.0;
  GameSpec s = make_corridor(p);
  s.actions.u.clear();
  s.actions.v.clear();
  for (double a : {-1.0, 0.0, 1.0}) s.actions.u.push_back(make_vec({a * u_speed}));
  for (double a : {-1.0, 0.0, 1.0}) s.actions.v.push_back(make_vec({a * v_speed}));
  s.actions.u_lo = {-u_speed};
  s.actions.u_hi = {u_speed};
  s.actions.v_lo = {-v_speed};
  s.actions.v_hi = {v_speed};
  return s;
}

// Independent recursive evaluation of the feasibility operator with the
// same nearest-node snapping.
bool tree_feasible(const GameSpec& spec, const Vec& x, int k) {
  if (spec.c(x) > 0.0) return false;
  if (k == spec.time.steps) return true;
  for (const Vec& u : spec.actions.u) {
    bool safe = true;
    for (const Vec& v : spec.actions.v) {
      Vec xn = dynamics_step(spec, x, u, v, spec.time.tau()).x;
      Vec snapped = spec.lattice.coord(spec.lattice.nearest(xn));
      if (!tree_feasible(spec, snapped, k + 1)) {
        safe = false;
        break;
      }
    }
    if (safe) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("terminal mask follows the constraint sign") {
  GameSpec spec = corridor(0.05, 1.0, 1.0, 11, 2);
  auto m = reach::terminal_mask(spec);
  long feasible_node = spec.lattice.nearest(make_vec({0.5, -0.5}));
  long caught_node = spec.lattice.nearest(make_vec({0.0, 0.0}));
  CHECK(m[static_cast<size_t>(feasible_node)] == 1);
  CHECK(m[static_cast<size_t>(caught_node)] == 0);
}

TEST_CASE("pair-distance constraint form") {
  GameSpec spec = corridor(0.0, 1.0, 1.0, 5, 2);
  spec.constraint.kind = ConstraintKind::kPairDistance;
  spec.constraint.radius = 0.05;
  spec.constraint.dims_a = {0};
  spec.constraint.dims_b = {1};
  CHECK(spec.c(make_vec({0.5, -0.5})) == doctest::Approx(0.05 - 1.0));
  CHECK(spec.c(make_vec({0.0, 0.0})) == doctest::Approx(0.05));
}

TEST_CASE("all-feasible and all-infeasible masks absorb") {
  GameSpec spec = corridor(0.0, 1.0, 1.0, 7, 2);  // no constraint
  auto fs = reach::compute(spec);
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) CHECK(fs.at(k, s));

  std::vector<std::uint8_t> none(static_cast<size_t>(spec.lattice.size()), 0);
  auto backed = reach::backup_mask(spec, none);
  for (long s = 0; s < spec.lattice.size(); ++s) CHECK(backed[static_cast<size_t>(s)] == 0);
}

TEST_CASE("faster pursuer flips near-boundary nodes infeasible") {
  // evader x1 slower than pursuer x2; nodes with a small gap become trapped
  GameSpec spec = corridor(0.25, 0.5, 1.5, 11, 2);
  auto fs = reach::compute(spec);
  bool flipped = false;
  for (long s = 0; s < spec.lattice.size(); ++s) {
    bool bf0 = tree_feasible(spec, spec.lattice.coord(s), 0);
    CHECK(fs.at(0, s) == bf0);
    if (fs.at(spec.time.steps, s) && !fs.at(0, s)) flipped = true;
  }
  CHECK(flipped);
}

TEST_CASE("mask backup is monotone in the next-step mask") {
  GameSpec spec = corridor(0.15, 0.8, 1.2, 9, 2);
  auto base = reach::terminal_mask(spec);
  std::mt19937_64 rng(7);
  std::vector<std::uint8_t> smaller = base;
  for (auto& b : smaller)
    if (b && rng() % 4 == 0) b = 0;  // mark a superset of nodes infeasible
  auto back_base = reach::backup_mask(spec, base);
  auto back_small = reach::backup_mask(spec, smaller);
  for (size_t s = 0; s < base.size(); ++s)
    if (back_small[s]) CHECK(back_base[s]);  // infeasible sets only grow
}

TEST_CASE("conservative lookup marks at least as many nodes infeasible") {
  GameSpec spec = corridor(0.18, 0.7, 1.3, 11, 3);
  auto nearest = reach::compute(spec, reach::Lookup::kNearest);
  auto conservative = reach::compute(spec, reach::Lookup::kConservative);
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s)
      if (conservative.at(k, s)) CHECK(nearest.at(k, s));
}

TEST_CASE("masks equal exhaustive tree search on random small instances") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int inst = 0; inst < 3; ++inst) {
    GameSpec spec = corridor(0.05 + 0.3 * U(rng), 0.4 + 0.6 * U(rng), 0.6 + 0.9 * U(rng), 9, 3);
    auto fs = reach::compute(spec);
    for (int k = 0; k <= spec.time.steps; ++k)
      for (long s = 0; s < spec.lattice.size(); ++s)
        CHECK(fs.at(k, s) == tree_feasible(spec, spec.lattice.coord(s), k));
  }
}

TEST_CASE("is_feasible snaps to the nearest node and validates bounds") {
  GameSpec spec = corridor(0.05, 1.0, 1.0, 11, 2);
  auto fs = reach::compute(spec);
  CHECK(reach::is_feasible(spec, fs, 2, make_vec({0.49, -0.51})) ==
        fs.at(2, spec.lattice.nearest(make_vec({0.5, -0.5}))));
  CHECK_THROWS_AS(reach::is_feasible(spec, fs, 0, make_vec({3.0, 0.0})), std::invalid_argument);
}
