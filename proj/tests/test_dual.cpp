#include <random>

#include "doctest.h"
#include "osig/dual.hpp"
#include "osig/oracles.hpp"

using namespace osig;

TEST_CASE("dual terminal values") {
  GameSpec bq = make_beer_quiche();
  // classic C(2,(B,b),[3/2,-1]) = min(3/2-2, -1+2) = -1/2; solver convention
  // negates both the argument and the value
  DualVector classic(1.5, -1.0);
  DualVector solver = oracles::beer_quiche::to_solver(classic);
  CHECK(-dual::dual_terminal(bq, make_vec({3.0}), solver) == doctest::Approx(-0.5).epsilon(1e-14));
  // phat equal to the payoff vector gives zero
  Vec leaf = make_vec({4.0});  // (B,d): payoffs (tough, weak) = (-1, 0) in solver signs
  DualVector pg(bq.g(leaf, 0), bq.g(leaf, 1));
  CHECK(dual::dual_terminal(bq, leaf, pg) == doctest::Approx(0.0));
  // violation carries the negative cap
  CorridorParams cp;
  cp.steps = 2;
  cp.horizon = 0.4;
  cp.radius = 0.05;
  GameSpec corr = make_corridor(cp);
  CHECK(dual::dual_terminal(corr, make_vec({0.2, 0.2}), DualVector(0.0, 0.0)) == -corr.cap);
}

TEST_CASE("dual stage game on an affine conjugate with no stage cost") {
  CorridorParams cp;
  cp.steps = 2;
  cp.horizon = 0.4;
  cp.nodes = 5;
  GameSpec spec = make_corridor(cp);
  auto masks = reach::compute(spec);
  DualGrid g = spec.dual_grid();
  std::vector<double> next(static_cast<size_t>(spec.lattice.size() * g.size()));
  for (long s = 0; s < spec.lattice.size(); ++s)
    for (long h = 0; h < g.size(); ++h) {
      auto q = g.coord(h);
      next[static_cast<size_t>(s * g.size() + h)] = 0.3 * q[0] + 0.7 * q[1];  // state-independent affine
    }
  DualVector ph(1.25, -2.5);
  auto sv = dual::dual_stage_minimax(spec, masks, next, 0, make_vec({0.0, 0.0}), ph);
  CHECK(sv.value == doctest::Approx(0.3 * ph[0] + 0.7 * ph[1]).epsilon(1e-10));
}

TEST_CASE("signaling game: conjugate table reproduces the worked mixed-strategy hull") {
  GameSpec spec = make_beer_quiche();
  auto masks = reach::compute(spec);
  auto conj = dual::dual_solve(spec, masks);
  // classic concave-hull value after beer at [3/2,-1] is
  // (2/3) phat[1] + (1/3) phat[2] - 2/3 = 0
  DualVector solver = oracles::beer_quiche::to_solver(DualVector(1.5, -1.0));
  long node_b = 1;
  long idx = -1;
  const DualGrid& g = conj.grid;
  for (long h = 0; h < g.size(); ++h) {
    auto q = g.coord(h);
    if (std::abs(q[0] - solver[0]) < 1e-12 && std::abs(q[1] - solver[1]) < 1e-12) idx = h;
  }
  REQUIRE(idx >= 0);
  CHECK(-conj.at(1, node_b, idx) == doctest::Approx(0.0).epsilon(1e-9));
  // pure branch after quiche: classic value phat[2] + 1 = 0 with certainty
  long node_q = 2;
  CHECK(-conj.at(1, node_q, idx) == doctest::Approx(0.0).epsilon(1e-9));
  // the classic interior formula at a nearby non-vertex point
  DualVector probe = oracles::beer_quiche::to_solver(DualVector(2.0, -1.0));
  double classic = 2.0 / 3.0 * 2.0 + 1.0 / 3.0 * (-1.0) - 2.0 / 3.0;
  long pidx = -1;
  for (long h = 0; h < g.size(); ++h) {
    auto q = g.coord(h);
    if (std::abs(q[0] - probe[0]) < 1e-12 && std::abs(q[1] - probe[1]) < 1e-12) pidx = h;
  }
  REQUIRE(pidx >= 0);
  CHECK(-conj.at(1, node_b, pidx) == doctest::Approx(classic).epsilon(1e-9));
}

TEST_CASE("identical types collapse the conjugate to a complete-information form") {
  CorridorParams cp;
  cp.steps = 2;
  cp.horizon = 0.4;
  cp.nodes = 7;
  cp.belief_count = 11;
  GameSpec spec = make_corridor(cp);
  spec.terminal.kind = TerminalKind::kCustom;
  spec.terminal.custom = [](const Vec& x, int) { return x[0] * x[0] - 0.5 * x[1] * x[1]; };
  spec.dual_lo = {-6.0, -6.0};
  spec.dual_hi = {6.0, 6.0};
  spec.dual_counts = {25, 25};
  auto masks = reach::compute(spec);
  auto conj = dual::dual_solve(spec, masks);
  auto ci = primal::solve_complete_info(spec, masks, 0);
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s)
      for (long h = 0; h < conj.grid.size(); ++h) {
        auto q = conj.grid.coord(h);
        double expect = std::max(q[0], q[1]) - ci[static_cast<size_t>(k)][static_cast<size_t>(s)];
        CHECK(conj.at(k, s, h) == doctest::Approx(expect).epsilon(1e-9));
      }
}

TEST_CASE("init_dual on the signaling game and an affine table") {
  GameSpec spec = make_beer_quiche();
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  DualVector ph = dual::init_dual(table, spec, make_vec({0.0}), Belief({1.0 / 3.0, 2.0 / 3.0}));
  CHECK(ph[0] == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(ph[1] == doctest::Approx(1.0).epsilon(1e-12));
  // subgradient identities on the lattice
  for (int j = 0; j < spec.belief_count; ++j) {
    double q = table.pgrid.p1(j);
    CHECK(ph[0] * q + ph[1] * (1 - q) <= table.at(0, 0, j) + 1e-9);
  }
  CHECK(ph[0] / 3.0 + ph[1] * 2.0 / 3.0 == doctest::Approx(table.at(0, 0, 2)).epsilon(1e-9));

  // affine value V = a p + b gives phat = (a + b, b) for every p
  primal::ValueTable affine = table;
  const double a = -2.0, b = 0.75;
  for (auto& slice : affine.vals)
    for (long s = 0; s < spec.lattice.size(); ++s)
      for (int j = 0; j < spec.belief_count; ++j)
        slice[static_cast<size_t>(s * spec.belief_count + j)] = a * affine.pgrid.p1(j) + b;
  for (double p : {0.1, 0.5, 0.9}) {
    DualVector d = dual::init_dual(affine, spec, make_vec({0.0}), Belief({p, 1 - p}));
    CHECK(d[0] == doctest::Approx(a + b).epsilon(1e-10));
    CHECK(d[1] == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("init_dual on the stateless game matches the closed form") {
  auto fp = oracles::football_params();
  auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, 2000);
  auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, 2000);
  oracles::HexnerStateless hx(c1.t, c1.d, c2.d);
  GameSpec spec = oracles::hexner_stateless_spec(hx, 40);
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  double p = 0.3;
  DualVector ph = dual::init_dual(table, spec, make_vec({0.0}), Belief({p, 1 - p}));
  DualVector expect = hx.init_dual(p);
  // the table error at t=0 is 4p(1-p) dD for a single offset dD, so the
  // subgradient components inherit at most |dD| (value) + 4|dD| (slope)
  double dD = std::abs(table.at(0, 0, spec.belief_grid().nearest(0.5)) - hx.value(0.0, 0.5));
  double tol = 2.2 * dD + 1e-9;
  CHECK(std::abs(ph[0] - expect[0]) <= tol);
  CHECK(std::abs(ph[1] - expect[1]) <= tol);
}

TEST_CASE("dual backup guards") {
  auto fp = oracles::football_params();
  auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, 500);
  auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, 500);
  oracles::HexnerStateless hx(c1.t, c1.d, c2.d);
  GameSpec spec = oracles::hexner_stateless_spec(hx, 10);
  auto masks = reach::compute(spec);
  // belief-dependent stage payoffs cannot drive the dual backup
  CHECK_THROWS_AS(dual::dual_solve(spec, masks), NumericGuardError);

  GameSpec bq = make_beer_quiche();
  auto bq_masks = reach::compute(bq);
  auto conj = dual::dual_solve(bq, bq_masks);
  CHECK_THROWS_AS(
      dual::dual_stage_minimax(bq, bq_masks, conj.vals[1], 0, make_vec({0.0}), DualVector(40.0, 0.0)),
      NumericGuardError);
}

TEST_CASE("Fenchel inequality on a small constrained game") {
  CorridorParams cp;
  cp.steps = 3;
  cp.horizon = 0.6;
  cp.nodes = 7;
  cp.belief_count = 11;
  cp.radius = 0.05;
  cp.effort_u = 0.1;
  cp.effort_v = 0.1;
  cp.cap = 60.0;
  GameSpec spec = make_corridor(cp);
  spec.dual_lo = {-8.0, -8.0};
  spec.dual_hi = {8.0, 8.0};
  spec.dual_counts = {33, 33};
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);
  double d_P = table.pgrid.spacing();
  double lipP = 0.0;
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(k, s)) continue;
      for (int j = 1; j < spec.belief_count; ++j)
        lipP = std::max(lipP, std::abs(table.at(k, s, j) - table.at(k, s, j - 1)) / d_P);
    }
  double tol = 4.0 * (d_P * lipP + conj.grid.spacing(0));
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(k, s)) continue;
      for (long h = 0; h < conj.grid.size(); ++h) {
        auto q = conj.grid.coord(h);
        for (int j = 0; j < spec.belief_count; ++j) {
          double p1 = table.pgrid.p1(j);
          CHECK(conj.at(k, s, h) >= q[0] * p1 + q[1] * (1 - p1) - table.at(k, s, j) - tol);
        }
      }
    }
}
