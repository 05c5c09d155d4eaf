#include "osig/sim.hpp"

#include <cmath>

#include "osig/parallel.hpp"

namespace osig {
namespace sim {

namespace {

std::vector<double> to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

TrajectoryRecord rollout(const GameSpec& spec, const primal::ValueTable& table,
                         const dual::ConjugateTable& conj, const reach::FeasibilitySet& masks,
                         const Vec& x0, const Belief& p0, TypeSource source, int fixed_type,
                         std::uint64_t seed) {
  strategy::Rng rng(seed);
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.p0 = p0.weights();
  if (source == TypeSource::kFixed) {
    rec.type = fixed_type;
  } else {
    std::discrete_distribution<int> dist(p0.weights().begin(), p0.weights().end());
    rec.type = dist(rng);
  }
  DualVector phat = dual::init_dual(table, spec, x0, p0);
  rec.phat0 = phat.e;

  Vec x = x0;
  Belief p = p0;
  const double tau = spec.time.tau();
  double stage_sum = 0.0;
  for (int k = 0; k < spec.time.steps; ++k) {
    if (!reach::is_feasible(spec, masks, k, x)) {
      StepRecord sr;
      sr.k = k;
      sr.t = spec.time.t(k);
      sr.x = to_std(x);
      sr.p = p.weights();
      sr.phat = phat.e;
      sr.resign = true;
      rec.steps.push_back(std::move(sr));
      rec.resigned = true;
      break;
    }
    strategy::P1Sample a = strategy::p1_act(spec, masks, table, k, x, p, rec.type, rng);
    strategy::P2Sample b = strategy::p2_act(spec, masks, conj, k, x, phat, rng);
    const Vec& u = spec.actions.u[static_cast<size_t>(a.action)];
    const Vec& v = spec.actions.v[static_cast<size_t>(b.action)];
    StepResult step = dynamics_step(spec, x, u, v, tau);
    stage_sum += tau * spec.realized_stage_cost(u, v, spec.time.t(k), rec.type);

    StepRecord sr;
    sr.k = k;
    sr.t = spec.time.t(k);
    sr.x = to_std(x);
    sr.u = to_std(u);
    sr.v = to_std(v);
    sr.p = a.posterior.weights();
    sr.phat = b.next.e;
    sr.clip = step.clipped;
    sr.pursuit = b.pursuit;
    rec.steps.push_back(std::move(sr));

    x = step.x;
    p = a.posterior;
    phat = b.next;
  }
  rec.x_final = to_std(x);
  rec.payoff = rec.resigned ? spec.cap : spec.g(x, rec.type) + stage_sum;
  return rec;
}

double reveal_delay(const std::vector<TrajectoryRecord>& records, int steps) {
  if (records.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& rec : records) {
    int delay = steps;
    for (const auto& s : rec.steps) {
      bool pure = true;
      for (double w : s.p)
        if (w > 1e-9 && w < 1.0 - 1e-9) pure = false;
      if (pure && !s.resign) {
        delay = s.k;
        break;
      }
    }
    acc += delay;
  }
  return acc / static_cast<double>(records.size());
}

double advantage(const GameSpec& spec, const reach::FeasibilitySet& masks,
                 const primal::ValueTable& table, int k, const Vec& x, int belief_node) {
  primal::StageRow row = primal::stage_row(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, x);
  long s = spec.lattice.nearest(x);
  double adv = row.value[static_cast<size_t>(belief_node)] - table.at(k, s, belief_node);
  if (adv < -1e-9) throw NumericGuardError("advantage must be nonnegative");
  return adv;
}

McSummary monte_carlo(const GameSpec& spec, const primal::ValueTable& table,
                      const dual::ConjugateTable& conj, const reach::FeasibilitySet& masks,
                      const Vec& x0, const Belief& p0, int runs, std::uint64_t base_seed,
                      TypeSource source, int fixed_type, std::vector<TrajectoryRecord>* keep) {
  std::vector<TrajectoryRecord> recs(static_cast<size_t>(runs));
  parallel_for(runs, [&](long i) {
    recs[static_cast<size_t>(i)] =
        rollout(spec, table, conj, masks, x0, p0, source, fixed_type, base_seed + static_cast<std::uint64_t>(i));
  });
  McSummary out;
  out.runs = runs;
  double sum = 0, sq = 0;
  for (const auto& r : recs) {
    sum += r.payoff;
    sq += r.payoff * r.payoff;
    if (r.resigned) ++out.resignations;
    for (const auto& s : r.steps)
      if (!s.x.empty() && spec.c(to_vec(s.x)) > 0) ++out.violations;
    if (!r.x_final.empty() && spec.c(to_vec(r.x_final)) > 0) ++out.violations;
  }
  out.payoff_mean = sum / runs;
  out.payoff_std = std::sqrt(std::max(0.0, sq / runs - out.payoff_mean * out.payoff_mean));
  out.delay_mean = reveal_delay(recs, spec.time.steps);
  if (keep) *keep = std::move(recs);
  return out;
}

}  // namespace sim
}  // namespace osig
