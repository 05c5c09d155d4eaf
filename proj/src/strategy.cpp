#include "osig/strategy.hpp"

#include <cmath>

namespace osig {
namespace strategy {

std::vector<double> P1Decision::conditional(const Belief& p, int type) const {
  std::vector<double> w(plan.lambda.size());
  double pi = p[type];
  if (pi <= 0) throw std::invalid_argument("conditional probabilities need p[type] > 0");
  double s = 0.0;
  for (size_t j = 0; j < w.size(); ++j) {
    double pj = type == 0 ? plan.points[j][0] : 1.0 - plan.points[j][0];
    w[j] = plan.lambda[j] * pj / pi;
    s += w[j];
  }
  if (std::abs(s - 1.0) > 1e-9) throw NumericGuardError("type-conditional split weights do not normalize");
  for (double& x : w) x /= s;
  return w;
}

P1Decision p1_decide(const GameSpec& spec, const reach::FeasibilitySet& masks,
                     const primal::ValueTable& table, int k, const Vec& x, const Belief& p) {
  P1Decision d;
  if (!reach::is_feasible(spec, masks, k, x)) {
    d.resign = true;
    return d;
  }
  primal::StageRow row = primal::stage_row(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, x);
  const BeliefGrid grid = table.pgrid;
  std::vector<double> ps(static_cast<size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) ps[static_cast<size_t>(j)] = grid.p1(j);
  Hull1D hull(ps, row.value);
  d.plan = split_at(hull, p[0]);
  for (size_t j = 0; j < d.plan.lambda.size(); ++j) {
    long node = d.plan.indices[j];  // hull vertices are belief-lattice nodes
    d.plan.actions.push_back(row.ustar[static_cast<size_t>(node)]);
  }
  return d;
}

P1Sample p1_act(const GameSpec& spec, const reach::FeasibilitySet& masks,
                const primal::ValueTable& table, int k, const Vec& x, const Belief& p, int type,
                Rng& rng) {
  if (p[type] <= 0) throw std::invalid_argument("p1_act called with zero-probability type");
  P1Decision d = p1_decide(spec, masks, table, k, x, p);
  P1Sample s;
  if (d.resign) {
    s.resign = true;
    s.posterior = p;
    return s;
  }
  std::vector<double> w = d.conditional(p, type);
  std::discrete_distribution<int> dist(w.begin(), w.end());
  s.point = dist(rng);
  s.action = d.plan.actions[static_cast<size_t>(s.point)];
  s.posterior = bayes_posterior(d, p, s.action);
  return s;
}

std::vector<std::pair<int, double>> P2Decision::action_distribution() const {
  std::vector<std::pair<int, double>> out;
  for (size_t j = 0; j < plan.lambda.size(); ++j) {
    int a = plan.actions[j];
    bool found = false;
    for (auto& e : out)
      if (e.first == a) {
        e.second += plan.lambda[j];
        found = true;
      }
    if (!found) out.emplace_back(a, plan.lambda[j]);
  }
  return out;
}

P2Decision p2_decide(const GameSpec& spec, const reach::FeasibilitySet& masks,
                     const dual::ConjugateTable& table, int k, const Vec& x, const DualVector& phat) {
  phat.check_finite(spec.cap);
  P2Decision d;
  const double tau = spec.time.tau();
  if (!reach::is_feasible(spec, masks, k, x)) {
    // pursuit: keep the state trapped; prefer actions whose every successor
    // stays infeasible, then larger trapped counts, then deeper violation
    d.pursuit = true;
    double best_key0 = -1, best_key1 = -1, best_key2 = -std::numeric_limits<double>::infinity();
    for (size_t iv = 0; iv < spec.actions.v.size(); ++iv) {
      int trapped = 0;
      double worst_c = std::numeric_limits<double>::infinity();
      for (const Vec& u : spec.actions.u) {
        Vec xn = dynamics_step(spec, x, u, spec.actions.v[iv], tau).x;
        bool inf = k + 1 <= spec.time.steps && !masks.at(k + 1, spec.lattice.nearest(xn));
        if (inf) ++trapped;
        worst_c = std::min(worst_c, spec.c(xn));
      }
      double key0 = trapped == static_cast<int>(spec.actions.u.size()) ? 1.0 : 0.0;
      if (key0 > best_key0 || (key0 == best_key0 && trapped > best_key1) ||
          (key0 == best_key0 && trapped == best_key1 && worst_c > best_key2)) {
        best_key0 = key0;
        best_key1 = trapped;
        best_key2 = worst_c;
        d.pursuit_action = static_cast<int>(iv);
      }
    }
    return d;
  }
  // the stage update p^j - tau l may sit one stage shift past the box; pull
  // it back within that slack, mirroring the backup's boundary policy
  double lmax = 0.0;
  for (const Vec& uu : spec.actions.u)
    for (const Vec& vv : spec.actions.v) lmax = std::max(lmax, std::abs(spec.stage_cost(uu, vv, 0.0, 0.0)));
  DualVector query = phat;
  for (int dim = 0; dim < 2; ++dim) {
    double lo = table.grid.lower(dim), hi = table.grid.upper(dim);
    double excess = std::max(lo - query[dim], query[dim] - hi);
    if (excess > tau * lmax + 1e-9)
      throw NumericGuardError("dual vector left the lattice; widen dual_lattice bounds");
    query[dim] = std::clamp(query[dim], lo, hi);
  }
  dual::DualStageRow row = dual::dual_stage_row(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, x);
  GridHull2D hull(table.grid, row.value, /*with_envelope=*/false);
  d.plan = split_at(hull, query);
  const double t = spec.time.t(k);
  for (size_t j = 0; j < d.plan.lambda.size(); ++j) {
    long node = d.plan.indices[j];
    int v = row.vstar[static_cast<size_t>(node)];
    int u = row.ustar[static_cast<size_t>(node)];
    d.plan.actions.push_back(v);
    d.u_reply.push_back(u);
    double shift = tau * spec.stage_cost(spec.actions.u[static_cast<size_t>(u)],
                                         spec.actions.v[static_cast<size_t>(v)], t, 0.0);
    d.next.emplace_back(d.plan.points[j][0] - shift, d.plan.points[j][1] - shift);
  }
  return d;
}

P2Sample p2_act(const GameSpec& spec, const reach::FeasibilitySet& masks,
                const dual::ConjugateTable& table, int k, const Vec& x, const DualVector& phat,
                Rng& rng) {
  P2Decision d = p2_decide(spec, masks, table, k, x, phat);
  P2Sample s;
  if (d.pursuit) {
    s.pursuit = true;
    s.action = d.pursuit_action;
    s.next = phat;
    return s;
  }
  std::discrete_distribution<int> dist(d.plan.lambda.begin(), d.plan.lambda.end());
  s.point = dist(rng);
  s.action = d.plan.actions[static_cast<size_t>(s.point)];
  s.next = d.next[static_cast<size_t>(s.point)];
  return s;
}

Belief bayes_posterior(const P1Decision& decision, const Belief& p, int observed_action) {
  if (decision.resign) throw std::invalid_argument("no posterior after resignation");
  double mass = 0.0;
  std::vector<double> post(static_cast<size_t>(p.size()), 0.0);
  for (size_t j = 0; j < decision.plan.lambda.size(); ++j) {
    if (decision.plan.actions[j] != observed_action) continue;
    mass += decision.plan.lambda[j];
    double p1 = decision.plan.points[j][0];
    post[0] += decision.plan.lambda[j] * p1;
    post[1] += decision.plan.lambda[j] * (1.0 - p1);
  }
  if (mass <= 1e-12) throw std::invalid_argument("observed action has zero probability under the split");
  for (double& x : post) x /= mass;
  return Belief::project(post);
}

}  // namespace strategy
}  // namespace osig
