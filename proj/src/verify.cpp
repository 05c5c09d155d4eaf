#include "osig/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "osig/dual.hpp"
#include "osig/io.hpp"
#include "osig/oracles.hpp"
#include "osig/primal.hpp"
#include "osig/reach.hpp"
#include "osig/sim.hpp"
#include "osig/strategy.hpp"

namespace osig {
namespace verify {

namespace {

CheckResult make(const std::string& name, double measured, double bound, bool pass,
                 const std::string& detail = "") {
  CheckResult r;
  r.name = name;
  r.pass = pass;
  r.measured = measured;
  r.bound = bound;
  r.detail = detail;
  return r;
}

CheckResult within(const std::string& name, double measured, double bound,
                   const std::string& detail = "") {
  return make(name, measured, bound, measured <= bound, detail);
}

const oracles::HexnerStateless& hexner_oracle() {
  static const oracles::HexnerStateless hx = [] {
    auto fp = oracles::football_params();
    auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, 2000);
    auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, 2000);
    return oracles::HexnerStateless(c1.t, c1.d, c2.d);
  }();
  return hx;
}

}  // namespace

std::vector<CheckResult> beer_quiche_primal() {
  std::vector<CheckResult> out;
  GameSpec spec = make_beer_quiche();
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  const int j13 = spec.belief_grid().nearest(1.0 / 3.0);

  double v_solver = table.at(0, 0, j13);
  double v_classic = -v_solver;  // maximizer-convention adapter
  out.push_back(within("root value V(0,.,1/3) = -1/6", std::abs(v_classic - (-1.0 / 6.0)), 1e-9));

  Belief p({1.0 / 3.0, 2.0 / 3.0});
  auto decision = strategy::p1_decide(spec, masks, table, 0, make_vec({0.0}), p);
  bool ok = !decision.resign && decision.plan.lambda.size() == 2;
  double err = 1.0;
  if (ok) {
    // vertices pT in {0, 2/3} with equal weights
    double lo = decision.plan.points[0][0], hi = decision.plan.points[1][0];
    if (lo > hi) std::swap(lo, hi);
    err = std::max({std::abs(lo - 0.0), std::abs(hi - 2.0 / 3.0),
                    std::abs(decision.plan.lambda[0] - 0.5), std::abs(decision.plan.lambda[1] - 0.5)});
  }
  out.push_back(make("split at 1/3: lambda=[1/2,1/2], vertices {0,2/3}", err, 1e-9, ok && err <= 1e-9));

  // type-conditional action probabilities
  auto cond_t = decision.conditional(p, 0);
  auto cond_w = decision.conditional(p, 1);
  double pr_b_tough = 0, pr_q_weak = 0;
  for (size_t j = 0; j < decision.plan.lambda.size(); ++j) {
    bool is_beer = decision.plan.actions[j] == 0;
    if (is_beer) pr_b_tough += cond_t[j];
    if (!is_beer) pr_q_weak += cond_w[j];
  }
  double cerr = std::max(std::abs(pr_b_tough - oracles::beer_quiche::pr_beer_given_tough()),
                         std::abs(pr_q_weak - oracles::beer_quiche::pr_quiche_given_weak()));
  out.push_back(within("conditionals Pr(B|T)=1, Pr(Q|W)=3/4", cerr, 1e-9));
  return out;
}

std::vector<CheckResult> beer_quiche_dual() {
  std::vector<CheckResult> out;
  GameSpec spec = make_beer_quiche();
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  Belief p({1.0 / 3.0, 2.0 / 3.0});
  DualVector phat = dual::init_dual(table, spec, make_vec({0.0}), p);
  DualVector classic = oracles::beer_quiche::to_classic(phat);
  double err = std::max(std::abs(classic[0] - 1.5), std::abs(classic[1] - (-1.0)));
  out.push_back(within("init_dual at [1/3,2/3] -> [3/2,-1] (classic)", err, 1e-9));

  auto conj = dual::dual_solve(spec, masks);
  auto after_beer = strategy::p2_decide(spec, masks, conj, 1, make_vec({1.0}), phat);
  double pb = 0, pd = 0;
  for (auto& [a, w] : after_beer.action_distribution()) (a == 0 ? pb : pd) += w;
  double err_b = std::max(std::abs(pb - 0.5), std::abs(pd - 0.5));
  out.push_back(within("after B: bully/defer each 1/2", err_b, 1e-9));

  auto after_quiche = strategy::p2_decide(spec, masks, conj, 1, make_vec({2.0}), phat);
  double qb = 0;
  for (auto& [a, w] : after_quiche.action_distribution())
    if (a == 0) qb += w;
  out.push_back(within("after Q: bully w.p. 1", std::abs(qb - 1.0), 1e-9));
  return out;
}

std::vector<CheckResult> hexner_critical_time() {
  std::vector<CheckResult> out;
  auto fp = oracles::football_params();
  const int grid = 1000;  // resolution 1e-3
  auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, grid);
  auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, grid);
  double tr = oracles::critical_time(c1.d, c2.d, c1.t);
  out.push_back(within("critical time = 0.4 within one grid step", std::abs(tr - 0.4),
                       fp.horizon / grid + 1e-12));
  return out;
}

std::vector<CheckResult> hexner_convergence() {
  std::vector<CheckResult> out;
  const auto& hx = hexner_oracle();
  double D0 = std::abs(hx.dtilde(0.0));
  std::vector<int> Ls = {10, 20, 40};
  std::vector<double> errs;
  std::ostringstream detail;
  int split_step_40 = -1;
  for (int L : Ls) {
    GameSpec spec = oracles::hexner_stateless_spec(hx, L);
    auto masks = reach::compute(spec);
    auto table = primal::solve(spec, masks);
    double err = 0.0;
    for (int k = 0; k <= L; ++k)
      for (int j = 0; j < spec.belief_count; ++j) {
        double closed = hx.value(spec.time.t(k), table.pgrid.p1(j));
        err = std::max(err, std::abs(table.at(k, 0, j) - closed));
      }
    errs.push_back(err);
    detail << "L=" << L << " err=" << err << " ";
    if (L == 40) {
      // first forward step where the stage data turns concave (hull < stage)
      int mid = spec.belief_grid().nearest(0.5);
      for (int k = 0; k < L && split_step_40 < 0; ++k) {
        primal::StageRow row =
            primal::stage_row(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, make_vec({0.0}));
        if (row.value[static_cast<size_t>(mid)] - table.at(k, 0, mid) > 1e-10) split_step_40 = k;
      }
    }
  }
  bool mono = errs[0] > errs[1] && errs[1] > errs[2];
  out.push_back(make("value error decreases monotonically in L", errs[2], errs[0], mono, detail.str()));
  out.push_back(within("L=40 max error <= 0.05 |D~0|", errs[2], 0.05 * D0));
  double t_split = split_step_40 < 0 ? -1.0 : split_step_40 * (1.0 / 40.0);
  out.push_back(make("first belief split within one step of t_r", std::abs(t_split - hx.t_r()),
                     1.0 / 40.0 + 1e-9, split_step_40 >= 0 && std::abs(t_split - hx.t_r()) <= 1.0 / 40.0 + 1e-9));
  return out;
}

namespace {

struct RandomCorridor {
  GameSpec spec;
  Vec x0;
  bool aligned = false;
};

RandomCorridor random_corridor(std::mt19937_64& rng, bool aligned) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CorridorParams p;
  p.nodes = 11;
  p.steps = 3;
  p.horizon = 0.6;
  p.belief_count = 21;
  p.target = 0.3 + 0.5 * U(rng);
  p.weight_own = 0.5 + 1.5 * U(rng);
  p.weight_opp = 0.5 + 1.5 * U(rng);
  p.effort_u = 0.2 * U(rng);
  p.effort_v = 0.2 * U(rng);
  p.cap = 50.0;
  p.prior1 = 0.5;
  RandomCorridor out;
  out.aligned = aligned;
  if (aligned) {
    p.speed = 1.0;  // tau * speed = lattice spacing
    p.radius = U(rng) < 0.5 ? 0.05 : 0.0;
    out.spec = make_corridor(p);
  } else {
    p.speed = 1.0;
    p.radius = 0.0;  // keep exact-tree feasibility identical to the lattice's
    out.spec = make_corridor(p);
    // replace the action speeds with off-lattice values
    out.spec.actions.u.clear();
    out.spec.actions.v.clear();
    for (int i = 0; i < 3; ++i) {
      out.spec.actions.u.push_back(make_vec({-1.0 + 2.0 * U(rng)}));
      out.spec.actions.v.push_back(make_vec({-1.0 + 2.0 * U(rng)}));
    }
  }
  std::uniform_int_distribution<int> node(2, 8);
  int i = node(rng), j = node(rng);
  if (out.spec.constraint.kind != ConstraintKind::kNone && std::abs(i - j) < 3)
    j = i >= 5 ? i - 3 : i + 3;
  out.x0 = make_vec({-1.0 + 0.2 * i, -1.0 + 0.2 * j});
  return out;
}

}  // namespace

std::vector<CheckResult> brute_force_equivalence(int n_games) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(0xc0771d04u);
  double worst_ratio = 0.0;
  bool all_ok = true;
  std::ostringstream detail;
  for (int g = 0; g < n_games; ++g) {
    RandomCorridor rc = random_corridor(rng, g % 2 == 0);
    auto masks = reach::compute(rc.spec);
    auto table = primal::solve(rc.spec, masks);
    auto bf = oracles::brute_force_value(rc.spec, rc.x0, 10, 3);
    long s0 = rc.spec.lattice.nearest(rc.x0);
    if (!bf.root_feasible || !masks.at(0, s0)) {
      // both must agree the root is trapped
      bool agree = bf.root_feasible == (masks.at(0, s0) != 0);
      all_ok = all_ok && agree;
      continue;
    }
    double d_P = table.pgrid.spacing();
    double tol = 0.0;
    for (double L : bf.lipschitz) tol += 2.0 * d_P * L;
    // state-interpolation slack measured along the tree
    double slack = 0.0;
    if (!rc.aligned) {
      std::vector<Vec> frontier{rc.x0};
      for (int k = 0; k < rc.spec.time.steps; ++k) {
        std::vector<Vec> next;
        double osc = 0.0;
        for (const Vec& x : frontier)
          for (const Vec& u : rc.spec.actions.u)
            for (const Vec& v : rc.spec.actions.v) {
              Vec xn = dynamics_step(rc.spec, x, u, v, rc.spec.time.tau()).x;
              next.push_back(xn);
              InterpStencil st = rc.spec.lattice.stencil(xn);
              bool on_node = true;
              for (int c = 0; c < st.m; ++c)
                if (st.w[static_cast<size_t>(c)] > 1e-12 && st.w[static_cast<size_t>(c)] < 1 - 1e-12) on_node = false;
              if (on_node) continue;
              for (int j = 0; j < rc.spec.belief_count; ++j) {
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (int c = 0; c < st.m; ++c) {
                  double val = table.at(k + 1, st.idx[static_cast<size_t>(c)], j);
                  lo = std::min(lo, val);
                  hi = std::max(hi, val);
                }
                osc = std::max(osc, hi - lo);
              }
            }
        slack += osc;
        frontier = std::move(next);
        if (frontier.size() > 4096) break;
      }
    }
    double err = 0.0;
    for (int j = 0; j < rc.spec.belief_count; ++j)
      err = std::max(err, std::abs(table.at(0, s0, j) - bf.value_at(table.pgrid.p1(j))));
    double bound = tol + slack + 1e-9;
    worst_ratio = std::max(worst_ratio, err / bound);
    if (err > bound) {
      all_ok = false;
      detail << "game " << g << " err=" << err << " bound=" << bound << "; ";
    }
  }
  out.push_back(make("lattice solver matches exact tree within hull+interp bound", worst_ratio, 1.0,
                     all_ok, detail.str()));
  return out;
}

namespace {

// Random piecewise-linear Lipschitz function on [0, 1].
struct PiecewiseLinear {
  std::vector<double> knots, vals;
  double max_slope = 0.0;

  double operator()(double x) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    size_t i = std::min(knots.size() - 2, static_cast<size_t>(std::max<long>(0, it - knots.begin() - 1)));
    double f = (x - knots[i]) / (knots[i + 1] - knots[i]);
    return vals[i] * (1 - f) + vals[i + 1] * f;
  }
};

PiecewiseLinear random_pl(std::mt19937_64& rng, double lip) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PiecewiseLinear f;
  int kinks = 6 + static_cast<int>(U(rng) * 5);
  f.knots.push_back(0.0);
  for (int i = 0; i < kinks; ++i) f.knots.push_back(U(rng));
  f.knots.push_back(1.0);
  std::sort(f.knots.begin(), f.knots.end());
  f.vals.resize(f.knots.size());
  f.vals[0] = U(rng) - 0.5;
  for (size_t i = 1; i < f.knots.size(); ++i) {
    double slope = (2.0 * U(rng) - 1.0) * lip;
    f.max_slope = std::max(f.max_slope, std::abs(slope));
    f.vals[i] = f.vals[i - 1] + slope * (f.knots[i] - f.knots[i - 1]);
  }
  return f;
}

double envelope_error(const PiecewiseLinear& f, int n_coarse, int n_ref) {
  std::vector<double> xs(static_cast<size_t>(n_coarse)), vs(static_cast<size_t>(n_coarse));
  for (int i = 0; i < n_coarse; ++i) {
    xs[static_cast<size_t>(i)] = static_cast<double>(i) / (n_coarse - 1);
    vs[static_cast<size_t>(i)] = f(xs[static_cast<size_t>(i)]);
  }
  Hull1D coarse(xs, vs);
  std::vector<double> xr(static_cast<size_t>(n_ref)), vr(static_cast<size_t>(n_ref));
  for (int i = 0; i < n_ref; ++i) {
    xr[static_cast<size_t>(i)] = static_cast<double>(i) / (n_ref - 1);
    vr[static_cast<size_t>(i)] = f(xr[static_cast<size_t>(i)]);
  }
  Hull1D ref(xr, vr);
  auto ref_vals = ref.values_at_samples();
  double err = 0.0;
  for (int i = 0; i < n_ref; ++i)
    err = std::max(err, coarse.eval(xr[static_cast<size_t>(i)]) - ref_vals[static_cast<size_t>(i)]);
  return err;
}

}  // namespace

std::vector<CheckResult> hull_refinement(int n_funcs) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(0x90291ull);
  const int n1 = 26;              // spacing h = 1/25
  const int n2 = 2 * (n1 - 1) + 1;
  const int nref = 10 * (n1 - 1) + 1;
  const double h = 1.0 / (n1 - 1);
  double sum1 = 0, sum2 = 0;
  bool mono_ok = true, bound_ok = true;
  for (int i = 0; i < n_funcs; ++i) {
    PiecewiseLinear f = random_pl(rng, 8.0);
    double e1 = envelope_error(f, n1, nref);
    double e2 = envelope_error(f, n2, nref);
    sum1 += e1;
    sum2 += e2;
    if (e2 > e1 + 1e-12) mono_ok = false;
    if (e1 > 2.0 * h * f.max_slope + 1e-12) bound_ok = false;
    if (e2 > 2.0 * (h / 2.0) * f.max_slope + 1e-12) bound_ok = false;
  }
  double ratio = sum2 / std::max(sum1, 1e-300);
  out.push_back(make("refined lattice never increases the error", mono_ok ? 0.0 : 1.0, 0.0, mono_ok));
  out.push_back(make("errors satisfy the 2 d_P L bound at both spacings", bound_ok ? 0.0 : 1.0, 0.0,
                     bound_ok));
  out.push_back(within("mean error at least halves when spacing halves", ratio, 0.5,
                       "mean ratio over " + std::to_string(n_funcs) + " functions"));
  return out;
}

std::vector<CheckResult> martingale_payoff(int runs) {
  std::vector<CheckResult> out;
  GameSpec spec = make_beer_quiche();
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);
  std::vector<sim::TrajectoryRecord> recs;
  sim::monte_carlo(spec, table, conj, masks, make_vec({0.0}), spec.prior, runs, 0x5eedbeef,
                   sim::TypeSource::kSampled, 0, &recs);
  double inc = 0.0, pay = 0.0, pay2 = 0.0;
  for (const auto& r : recs) {
    inc += r.steps.front().p[0] - r.p0[0];
    double classic = -r.payoff;  // maximizer-convention payoff
    pay += classic;
    pay2 += classic * classic;
  }
  inc /= runs;
  pay /= runs;
  double se = std::sqrt(std::max(0.0, pay2 / runs - pay * pay) / runs);
  out.push_back(within("root belief increment mean", std::abs(inc), 4.0 * std::sqrt(0.25 / runs)));
  out.push_back(within("mean classic payoff within 3 SE of -1/6", std::abs(pay - (-1.0 / 6.0)),
                       3.0 * se + 1e-12));
  return out;
}

namespace {

// Direct recursion over (node, step) with the same snapping rule; an
// independent implementation of the feasibility operator.
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

GameSpec random_reach_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CorridorParams p;
  p.nodes = 7 + 2 * static_cast<int>(U(rng) * 2);  // 7..11 odd
  p.steps = 2 + static_cast<int>(U(rng) * 2);      // 2..3
  p.horizon = 0.2 * p.steps;
  p.belief_count = 5;
  p.radius = 0.05 + 0.3 * U(rng);
  p.speed = 0.5 + U(rng);
  p.cap = 50.0;
  GameSpec spec = make_corridor(p);
  if (U(rng) < 0.4) {
    // asymmetric speeds: pursuer faster
    spec.actions.u.clear();
    spec.actions.v.clear();
    double su = 0.4 + 0.4 * U(rng), sv = su + 0.4 + 0.4 * U(rng);
    for (double a : {-1.0, 0.0, 1.0}) spec.actions.u.push_back(make_vec({a * su}));
    for (double a : {-1.0, 0.0, 1.0}) spec.actions.v.push_back(make_vec({a * sv}));
    spec.actions.u_lo = {-su};
    spec.actions.u_hi = {su};
    spec.actions.v_lo = {-sv};
    spec.actions.v_hi = {sv};
  }
  return spec;
}

}  // namespace

std::vector<CheckResult> reach_oracle(int n_instances) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(0x7ea7c4u);
  long mismatches = 0, checked = 0;
  for (int i = 0; i < n_instances; ++i) {
    GameSpec spec = random_reach_instance(rng);
    auto masks = reach::compute(spec);
    for (int k = 0; k <= spec.time.steps; ++k)
      for (long s = 0; s < spec.lattice.size(); ++s) {
        bool dp = masks.at(k, s);
        bool bf = tree_feasible(spec, spec.lattice.coord(s), k);
        ++checked;
        if (dp != bf) ++mismatches;
      }
  }
  out.push_back(make("masks equal exhaustive min-max tree search", static_cast<double>(mismatches),
                     0.0, mismatches == 0, std::to_string(checked) + " nodes checked"));
  return out;
}

std::vector<CheckResult> property_suites() {
  std::vector<CheckResult> out;

  CorridorParams cp;
  cp.nodes = 11;
  cp.steps = 4;
  cp.horizon = 0.8;
  cp.belief_count = 21;
  cp.radius = 0.05;
  cp.effort_u = 0.1;
  cp.effort_v = 0.1;
  cp.target = 0.6;
  cp.cap = 60.0;
  GameSpec spec = make_corridor(cp);
  spec.dual_lo = {-10.0, -10.0};
  spec.dual_hi = {10.0, 10.0};
  spec.dual_counts = {41, 41};
  auto masks = reach::compute(spec);
  auto table = primal::solve(spec, masks);
  auto conj = dual::dual_solve(spec, masks);

  // convexity along p and both dual axes
  double worst_p = 0.0, worst_h = 0.0;
  const int nP = spec.belief_count;
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) {
      for (int j = 1; j + 1 < nP; ++j)
        worst_p = std::min(worst_p, table.at(k, s, j - 1) + table.at(k, s, j + 1) - 2 * table.at(k, s, j));
      const DualGrid& g = conj.grid;
      for (int a = 0; a < g.count(0); ++a)
        for (int b = 1; b + 1 < g.count(1); ++b)
          worst_h = std::min(worst_h, conj.at(k, s, g.index(a, b - 1)) + conj.at(k, s, g.index(a, b + 1)) -
                                          2 * conj.at(k, s, g.index(a, b)));
      for (int b = 0; b < g.count(1); ++b)
        for (int a = 1; a + 1 < g.count(0); ++a)
          worst_h = std::min(worst_h, conj.at(k, s, g.index(a - 1, b)) + conj.at(k, s, g.index(a + 1, b)) -
                                          2 * conj.at(k, s, g.index(a, b)));
    }
  out.push_back(within("value convex in p after every backup", -worst_p, 1e-9));
  out.push_back(within("conjugate convex in p-hat after every backup", -worst_h, 1e-9));

  // Fenchel inequality between the tables at feasible states
  double lipP = 0.0, lipH = 0.0;
  double d_P = table.pgrid.spacing();
  double d_H = std::max(conj.grid.spacing(0), conj.grid.spacing(1));
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(k, s)) continue;
      for (int j = 1; j < nP; ++j)
        lipP = std::max(lipP, std::abs(table.at(k, s, j) - table.at(k, s, j - 1)) / d_P);
      for (int a = 0; a < conj.grid.count(0); ++a)
        for (int b = 1; b < conj.grid.count(1); ++b)
          lipH = std::max(lipH, std::abs(conj.at(k, s, conj.grid.index(a, b)) -
                                         conj.at(k, s, conj.grid.index(a, b - 1))) /
                                    conj.grid.spacing(1));
    }
  double tol = 4.0 * (d_P * lipP + d_H * std::min(lipH, 1.0));
  double worst_gap = 0.0;
  for (int k = 0; k <= spec.time.steps; ++k)
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(k, s)) continue;
      for (long h = 0; h < conj.grid.size(); ++h) {
        auto q = conj.grid.coord(h);
        for (int j = 0; j < nP; ++j) {
          double p1 = table.pgrid.p1(j);
          double fen = q[0] * p1 + q[1] * (1 - p1) - table.at(k, s, j);
          worst_gap = std::max(worst_gap, fen - conj.at(k, s, h));
        }
      }
    }
  out.push_back(within("Fenchel inequality V* >= p-hat.p - V", worst_gap, tol,
                       "tol=" + io::format_float(tol)));

  // equality at the initial dual vector
  double worst_eq = 0.0;
  long eq_checked = 0;
  for (long s = 0; s < spec.lattice.size(); ++s) {
    if (!masks.at(0, s)) continue;
    for (int j = 0; j < nP; ++j) {
      Belief p = table.pgrid.belief(j);
      DualVector ph = dual::init_dual(table, spec, spec.lattice.coord(s), p);
      if (!conj.grid.contains(ph)) continue;
      InterpStencil st = conj.grid.stencil(ph[0], ph[1]);
      double vs = 0.0;
      for (int c = 0; c < st.m; ++c)
        vs += st.w[static_cast<size_t>(c)] * conj.at(0, s, st.idx[static_cast<size_t>(c)]);
      double fen = ph[0] * p[0] + ph[1] * p[1] - table.at(0, s, j);
      worst_eq = std::max(worst_eq, std::abs(vs - fen));
      ++eq_checked;
    }
  }
  out.push_back(make("Fenchel equality at init_dual", worst_eq, tol, eq_checked > 0 && worst_eq <= tol,
                     std::to_string(eq_checked) + " points"));

  // complete-information reduction at pure beliefs
  double worst_ci = 0.0;
  for (int type = 0; type < 2; ++type) {
    auto ci = primal::solve_complete_info(spec, masks, type);
    int j = type == 0 ? nP - 1 : 0;  // p[0] = 1 for type 0, 0 for type 1
    for (int k = 0; k <= spec.time.steps; ++k)
      for (long s = 0; s < spec.lattice.size(); ++s)
        worst_ci = std::max(worst_ci, std::abs(table.at(k, s, j) - ci[static_cast<size_t>(k)][static_cast<size_t>(s)]));
  }
  out.push_back(within("complete-information reduction exact at p in {0,1}", worst_ci, 1e-12));
  return out;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "beer-quiche") {
    auto a = beer_quiche_primal();
    auto b = beer_quiche_dual();
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (name == "hexner") {
    auto a = hexner_critical_time();
    auto b = hexner_convergence();
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (name == "brute-force") return brute_force_equivalence();
  if (name == "prop1") return hull_refinement();
  if (name == "martingale") return martingale_payoff();
  if (name == "reach") return reach_oracle();
  if (name == "properties") return property_suites();
  throw std::invalid_argument("unknown verify suite '" + name + "'");
}

std::vector<CheckResult> run_all() {
  std::vector<CheckResult> all;
  for (const char* s : {"beer-quiche", "hexner", "brute-force", "prop1", "martingale", "reach", "properties"}) {
    auto r = run_suite(s);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

}  // namespace verify
}  // namespace osig
