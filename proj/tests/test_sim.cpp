#include "doctest.h"
#include "osig/oracles.hpp"
#include "osig/sim.hpp"

using namespace osig;

namespace {

struct BeerQuiche {
  GameSpec spec = make_beer_quiche();
  reach::FeasibilitySet masks = reach::compute(spec);
  primal::ValueTable table = primal::solve(spec, masks);
  dual::ConjugateTable conj = dual::dual_solve(spec, masks);
  Belief prior = Belief({1.0 / 3.0, 2.0 / 3.0});
};

const BeerQuiche& bq() {
  static const BeerQuiche b;
  return b;
}

double recompute_payoff(const GameSpec& spec, const sim::TrajectoryRecord& rec) {
  if (rec.resigned) return spec.cap;
  double acc = 0.0;
  for (const auto& s : rec.steps)
    acc += spec.time.tau() * spec.realized_stage_cost(to_vec(s.u), to_vec(s.v), s.t, rec.type);
  return acc + spec.g(to_vec(rec.x_final), rec.type);
}

}  // namespace

TEST_CASE("rollouts are reproducible bit for bit") {
  const auto& g = bq();
  auto a = sim::rollout(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior,
                        sim::TypeSource::kSampled, 0, 7);
  auto b = sim::rollout(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior,
                        sim::TypeSource::kSampled, 0, 7);
  CHECK(a.type == b.type);
  CHECK(a.payoff == b.payoff);
  REQUIRE(a.steps.size() == b.steps.size());
  for (size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].x == b.steps[i].x);
    CHECK(a.steps[i].u == b.steps[i].u);
    CHECK(a.steps[i].v == b.steps[i].v);
    CHECK(a.steps[i].p == b.steps[i].p);
    CHECK(a.steps[i].phat == b.steps[i].phat);
  }
}

TEST_CASE("signaling-game rollouts follow the equilibrium support") {
  const auto& g = bq();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto r = sim::rollout(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior,
                          sim::TypeSource::kSampled, 0, seed);
    REQUIRE(r.steps.size() == 2);
    int u0 = static_cast<int>(std::lround(r.steps[0].u[0]));
    if (r.type == 0) CHECK(u0 == 0);  // tough always drinks beer
    // posterior matches the observed action
    if (u0 == 0)
      CHECK(r.steps[0].p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    else
      CHECK(r.steps[0].p[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(recompute_payoff(g.spec, r) == doctest::Approx(r.payoff).epsilon(1e-9));
  }
}

TEST_CASE("complete-information rollouts keep the belief constant") {
  CorridorParams cp;
  cp.steps = 3;
  cp.horizon = 0.6;
  cp.nodes = 7;
  cp.belief_count = 11;
  GameSpec spec = make_corridor(cp);
  spec.terminal.kind = TerminalKind::kCustom;
  spec.terminal.custom = [](const Vec& x, int) { return x[0] * x[0] - x[1] * x[1]; };
  spec.dual_lo = {-6, -6};
  spec.dual_hi = {6, 6};
  spec.dual_counts = {25, 25};
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);
  auto a = sim::rollout(spec, table, conj, masks, make_vec({0.0, 0.4}), Belief({0.3, 0.7}),
                        sim::TypeSource::kFixed, 1, 5);
  auto b = sim::rollout(spec, table, conj, masks, make_vec({0.0, 0.4}), Belief({0.3, 0.7}),
                        sim::TypeSource::kFixed, 1, 6);
  for (const auto& s : a.steps) CHECK(s.p[0] == doctest::Approx(0.3).epsilon(1e-9));
  // play is deterministic, so different seeds agree
  CHECK(a.x_final == b.x_final);
}

TEST_CASE("stateless game reveals within one step of the critical time") {
  auto fp = oracles::football_params();
  auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, 2000);
  auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, 2000);
  oracles::HexnerStateless hx(c1.t, c1.d, c2.d);
  const int L = 10;
  GameSpec spec = oracles::hexner_stateless_spec(hx, L);
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  dual::ConjugateTable conj;  // unused: the stateless game has no dual solve
  conj.steps = L;
  conj.grid = spec.dual_grid();
  conj.lattice = spec.lattice;
  conj.masks = masks;
  conj.vals.assign(static_cast<size_t>(L) + 1,
                   std::vector<double>(static_cast<size_t>(spec.lattice.size() * spec.dual_grid().size()), 0.0));
  // drive only the informed player's side
  std::vector<int> delays;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    strategy::Rng rng(seed);
    Belief p({0.5, 0.5});
    int delay = L;
    for (int k = 0; k < L; ++k) {
      auto s = strategy::p1_act(spec, masks, table, k, make_vec({0.0}), p, 0, rng);
      p = s.posterior;
      if (p.is_pure()) {
        delay = k;
        break;
      }
    }
    delays.push_back(delay);
    CHECK(std::abs(delay * spec.time.tau() - hx.t_r()) <= spec.time.tau() + 1e-9);
  }
  for (int d : delays) CHECK(d == delays[0]);  // same reveal step for every seed
  CHECK(delays[0] == hx.expected_reveal_step(L));
}

TEST_CASE("reveal delay conventions") {
  const auto& g = bq();
  std::vector<sim::TrajectoryRecord> recs;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    recs.push_back(sim::rollout(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior,
                                sim::TypeSource::kSampled, 0, seed));
  // quiche reveals the weak type immediately; beer splits to 2/3 (not pure),
  // and the second stage never splits, so beer paths never reveal
  double expect = 0.0;
  for (const auto& r : recs) {
    bool beer = std::lround(r.steps[0].u[0]) == 0;
    expect += beer ? g.spec.time.steps : 0;
  }
  expect /= static_cast<double>(recs.size());
  CHECK(sim::reveal_delay(recs, g.spec.time.steps) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("advantage is the hull gap and vanishes at vertices") {
  const auto& g = bq();
  int j13 = g.spec.belief_grid().nearest(1.0 / 3.0);
  double adv = sim::advantage(g.spec, g.masks, g.table, 0, make_vec({0.0}), j13);
  CHECK(adv == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  // at the extreme belief the stage value is already on the hull
  CHECK(sim::advantage(g.spec, g.masks, g.table, 0, make_vec({0.0}), 0) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(sim::advantage(g.spec, g.masks, g.table, 0, make_vec({0.0}), g.spec.belief_count - 1) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("monte carlo aggregates are deterministic and near the game value") {
  const auto& g = bq();
  auto s1 = sim::monte_carlo(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior, 2000, 99);
  auto s2 = sim::monte_carlo(g.spec, g.table, g.conj, g.masks, make_vec({0.0}), g.prior, 2000, 99);
  CHECK(s1.payoff_mean == s2.payoff_mean);
  CHECK(s1.violations == 0);
  // classic payoff is the negation; 3-sigma band around -1/6
  double se = s1.payoff_std / std::sqrt(2000.0);
  CHECK(std::abs(-s1.payoff_mean - (-1.0 / 6.0)) <= 3.0 * se);
}

TEST_CASE("equilibrium play never violates the constraint from feasible starts") {
  CorridorParams cp;
  cp.steps = 4;
  cp.horizon = 0.8;
  cp.nodes = 11;
  cp.belief_count = 21;
  cp.radius = 0.05;
  cp.cap = 60.0;
  GameSpec spec = make_corridor(cp);
  spec.dual_lo = {-8, -8};
  spec.dual_hi = {8, 8};
  spec.dual_counts = {17, 17};
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);
  Vec x0 = make_vec({-0.4, 0.6});
  REQUIRE(reach::is_feasible(spec, masks, 0, x0));
  auto mc = sim::monte_carlo(spec, table, conj, masks, x0, spec.prior, 200, 31);
  CHECK(mc.violations == 0);
  CHECK(mc.resignations == 0);
}
