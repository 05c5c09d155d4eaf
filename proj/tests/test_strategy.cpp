#include "doctest.h"
#include "osig/oracles.hpp"
#include "osig/strategy.hpp"

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

}  // namespace

TEST_CASE("informed player's conditionals at the classic prior") {
  const auto& g = bq();
  auto d = strategy::p1_decide(g.spec, g.masks, g.table, 0, make_vec({0.0}), g.prior);
  REQUIRE(!d.resign);
  REQUIRE(d.plan.lambda.size() == 2);
  auto tough = d.conditional(g.prior, 0);
  auto weak = d.conditional(g.prior, 1);
  // identify the beer vertex (action id 0)
  int jb = d.plan.actions[0] == 0 ? 0 : 1;
  int jq = 1 - jb;
  CHECK(tough[static_cast<size_t>(jb)] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tough[static_cast<size_t>(jq)] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(weak[static_cast<size_t>(jq)] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(weak[static_cast<size_t>(jb)] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sampling follows the conditional distribution and posts the vertex") {
  const auto& g = bq();
  strategy::Rng rng(7);
  int beer_count = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    auto s = strategy::p1_act(g.spec, g.masks, g.table, 0, make_vec({0.0}), g.prior, 1, rng);
    REQUIRE(!s.resign);
    if (s.action == 0) {
      ++beer_count;
      CHECK(s.posterior[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    } else {
      CHECK(s.posterior[0] == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
  // weak type plays beer w.p. 1/4
  CHECK(std::abs(beer_count / static_cast<double>(n) - 0.25) < 0.03);
}

TEST_CASE("zero-probability type is rejected") {
  const auto& g = bq();
  strategy::Rng rng(1);
  CHECK_THROWS_AS(
      strategy::p1_act(g.spec, g.masks, g.table, 0, make_vec({0.0}), Belief({0.0, 1.0}), 0, rng),
      std::invalid_argument);
}

TEST_CASE("hull-vertex query yields a deterministic action with unmoved belief") {
  const auto& g = bq();
  Belief p({5.0 / 6.0, 1.0 / 6.0});  // lattice node above 2/3: no split
  auto d = strategy::p1_decide(g.spec, g.masks, g.table, 0, make_vec({0.0}), p);
  REQUIRE(d.plan.lambda.size() == 1);
  CHECK(d.plan.points[0][0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  strategy::Rng rng(3);
  auto s = strategy::p1_act(g.spec, g.masks, g.table, 0, make_vec({0.0}), p, 0, rng);
  CHECK(s.posterior[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("off-node query in a flat hull region keeps the belief a martingale") {
  const auto& g = bq();
  Belief p({0.8, 0.2});  // between lattice nodes on the affine hull piece
  auto d = strategy::p1_decide(g.spec, g.masks, g.table, 0, make_vec({0.0}), p);
  REQUIRE(d.plan.lambda.size() == 2);
  // both vertices carry the same action, so the posterior equals the prior
  CHECK(d.plan.actions[0] == d.plan.actions[1]);
  Belief post = strategy::bayes_posterior(d, p, d.plan.actions[0]);
  CHECK(post[0] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("uninformed player's mixes after each observed action") {
  const auto& g = bq();
  DualVector ph = dual::init_dual(g.table, g.spec, make_vec({0.0}), g.prior);
  auto after_b = strategy::p2_decide(g.spec, g.masks, g.conj, 1, make_vec({1.0}), ph);
  REQUIRE(!after_b.pursuit);
  double bully = 0, defer = 0;
  for (auto& [a, w] : after_b.action_distribution()) (a == 0 ? bully : defer) += w;
  CHECK(bully == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(defer == doctest::Approx(0.5).epsilon(1e-9));

  auto after_q = strategy::p2_decide(g.spec, g.masks, g.conj, 1, make_vec({2.0}), ph);
  auto dist = after_q.action_distribution();
  REQUIRE(dist.size() == 1);
  CHECK(dist[0].first == 0);  // bully
  CHECK(dist[0].second == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("no dual split at the root of the signaling game") {
  const auto& g = bq();
  DualVector ph = dual::init_dual(g.table, g.spec, make_vec({0.0}), g.prior);
  auto root = strategy::p2_decide(g.spec, g.masks, g.conj, 0, make_vec({0.0}), ph);
  REQUIRE(root.plan.lambda.size() == 1);
  CHECK(root.next[0].e[0] == doctest::Approx(ph[0]).epsilon(1e-12));
  CHECK(root.next[0].e[1] == doctest::Approx(ph[1]).epsilon(1e-12));
}

TEST_CASE("bayes posterior: classic updates and consistency") {
  const auto& g = bq();
  auto d = strategy::p1_decide(g.spec, g.masks, g.table, 0, make_vec({0.0}), g.prior);
  Belief after_beer = strategy::bayes_posterior(d, g.prior, 0);
  Belief after_quiche = strategy::bayes_posterior(d, g.prior, 1);
  CHECK(after_beer[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(after_beer[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(after_quiche[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(after_quiche[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("non-revealing split leaves the prior unchanged") {
  strategy::P1Decision d;
  d.plan.lambda = {0.4, 0.6};
  d.plan.points = {{0.2}, {0.7}};
  d.plan.values = {0.0, 0.0};
  d.plan.actions = {1, 1};  // both vertices share the action
  Belief p({0.5, 0.5});
  Belief post = strategy::bayes_posterior(d, p, 1);
  CHECK(post[0] == doctest::Approx(0.4 * 0.2 + 0.6 * 0.7).epsilon(1e-12));
  CHECK_THROWS_AS(strategy::bayes_posterior(d, p, 0), std::invalid_argument);
}

TEST_CASE("split is a martingale when marginalized over types") {
  const auto& g = bq();
  auto d = strategy::p1_decide(g.spec, g.masks, g.table, 0, make_vec({0.0}), g.prior);
  for (int dim = 0; dim < 2; ++dim) {
    double total = 0.0;
    for (int type = 0; type < 2; ++type) {
      auto cond = d.conditional(g.prior, type);
      double e_post = 0.0;
      for (size_t j = 0; j < cond.size(); ++j) {
        double pj = dim == 0 ? d.plan.points[j][0] : 1.0 - d.plan.points[j][0];
        e_post += cond[j] * pj;
      }
      total += g.prior[type] * e_post;
    }
    CHECK(total == doctest::Approx(g.prior[dim]).epsilon(1e-12));
  }
}

TEST_CASE("identical payoffs: deterministic play, belief frozen") {
  CorridorParams cp;
  cp.steps = 3;
  cp.horizon = 0.6;
  cp.nodes = 7;
  cp.belief_count = 11;
  GameSpec spec = make_corridor(cp);
  spec.terminal.kind = TerminalKind::kCustom;
  spec.terminal.custom = [](const Vec& x, int) { return x[0] * x[0] - x[1] * x[1]; };
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  strategy::Rng rng(17);
  Belief p({0.4, 0.6});
  for (int k = 0; k < spec.time.steps; ++k) {
    auto s = strategy::p1_act(spec, masks, table, k, make_vec({0.2, -0.4}), p, 1, rng);
    CHECK(s.posterior[0] == doctest::Approx(p[0]).epsilon(1e-9));
    auto s2 = strategy::p1_act(spec, masks, table, k, make_vec({0.2, -0.4}), p, 1, rng);
    CHECK(s2.action == s.action);
  }
}

TEST_CASE("pursuit mode engages on trapped states") {
  // pursuer strictly faster: near-contact states are trapped
  CorridorParams cp;
  cp.steps = 2;
  cp.horizon = 0.4;
  cp.nodes = 11;
  cp.radius = 0.25;
  cp.belief_count = 5;
  GameSpec spec = make_corridor(cp);
  spec.actions.u.clear();
  spec.actions.v.clear();
  for (double a : {-1.0, 0.0, 1.0}) spec.actions.u.push_back(make_vec({a * 0.4}));
  for (double a : {-1.0, 0.0, 1.0}) spec.actions.v.push_back(make_vec({a * 1.4}));
  spec.actions.u_lo = {-0.4};
  spec.actions.u_hi = {0.4};
  spec.actions.v_lo = {-1.4};
  spec.actions.v_hi = {1.4};
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);
  Vec trapped = make_vec({0.0, 0.4});
  REQUIRE(spec.c(trapped) <= 0.0);  // not yet caught
  REQUIRE(!reach::is_feasible(spec, masks, 0, trapped));
  auto d2 = strategy::p2_decide(spec, masks, conj, 0, trapped, DualVector(0.0, 0.0));
  CHECK(d2.pursuit);
  // the pursuit action closes the gap
  CHECK(spec.actions.v[static_cast<size_t>(d2.pursuit_action)][0] < 0.0);
  auto d1 = strategy::p1_decide(spec, masks, table, 0, trapped, Belief({0.5, 0.5}));
  CHECK(d1.resign);
}
