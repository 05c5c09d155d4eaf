#include "osig/primal.hpp"

#include <atomic>
#include <cmath>

#include "osig/parallel.hpp"

namespace osig {
namespace primal {

namespace {

struct Successor {
  bool feasible = false;
  bool clipped = false;
  InterpStencil st;
};

// Successor lookup data per (u, v) pair; shared across belief nodes. The
// value is approximated separately on the trapped and feasible regions:
// lookups whose nearest node is trapped read the cap, and interpolation at
// feasible points renormalizes over the feasible cell corners so the cap
// never bleeds into finite values.
std::vector<Successor> successors(const GameSpec& spec, const reach::FeasibilitySet& masks, int k,
                                  const Vec& x) {
  const double tau = spec.time.tau();
  std::vector<Successor> out;
  out.reserve(spec.actions.u.size() * spec.actions.v.size());
  for (const Vec& u : spec.actions.u)
    for (const Vec& v : spec.actions.v) {
      StepResult sr = dynamics_step(spec, x, u, v, tau);
      Successor s;
      s.clipped = sr.clipped;
      s.feasible = masks.at(k + 1, spec.lattice.nearest(sr.x));
      if (s.feasible) {
        InterpStencil raw = spec.lattice.stencil(sr.x);
        double total = 0.0;
        for (int c = 0; c < raw.m; ++c) {
          if (!masks.at(k + 1, raw.idx[static_cast<size_t>(c)])) continue;
          s.st.idx[static_cast<size_t>(s.st.m)] = raw.idx[static_cast<size_t>(c)];
          s.st.w[static_cast<size_t>(s.st.m)] = raw.w[static_cast<size_t>(c)];
          total += raw.w[static_cast<size_t>(c)];
          ++s.st.m;
        }
        if (total <= 1e-12) {
          s.feasible = false;
        } else {
          for (int c = 0; c < s.st.m; ++c) s.st.w[static_cast<size_t>(c)] /= total;
        }
      }
      out.push_back(s);
    }
  return out;
}

}  // namespace

double terminal_value(const GameSpec& spec, const Vec& x, const Belief& p) {
  if (spec.c(x) > 0.0) return spec.cap;
  double s = 0.0;
  for (int i = 0; i < spec.num_types; ++i) s += p[i] * spec.g(x, i);
  return s;
}

StageRow stage_row(const GameSpec& spec, const reach::FeasibilitySet& masks,
                   const std::vector<double>& next_slice, int k, const Vec& x, SolveStats* stats) {
  const int nP = spec.belief_count;
  const int nu = static_cast<int>(spec.actions.u.size());
  const int nv = static_cast<int>(spec.actions.v.size());
  const double tau = spec.time.tau();
  const double t = spec.time.t(k);
  const BeliefGrid grid = spec.belief_grid();
  auto succ = successors(spec, masks, k, x);
  if (stats)
    for (const auto& s : succ)
      if (s.clipped) ++stats->clipped_successors;

  StageRow row;
  row.value.assign(static_cast<size_t>(nP), 0.0);
  row.ustar.assign(static_cast<size_t>(nP), 0);
  row.vstar.assign(static_cast<size_t>(nP), 0);
  std::vector<double> lookup(static_cast<size_t>(nu * nv));
  for (int j = 0; j < nP; ++j) {
    for (int a = 0; a < nu * nv; ++a) {
      const Successor& s = succ[static_cast<size_t>(a)];
      if (!s.feasible) {
        lookup[static_cast<size_t>(a)] = spec.cap;
        continue;
      }
      double v = 0.0;
      for (int c = 0; c < s.st.m; ++c)
        v += s.st.w[static_cast<size_t>(c)] *
             next_slice[static_cast<size_t>(s.st.idx[static_cast<size_t>(c)]) * nP + static_cast<size_t>(j)];
      lookup[static_cast<size_t>(a)] = v;
    }
    const double p1 = grid.p1(j);
    double best_u = 0.0;
    int bu = 0, bv_of_bu = 0;
    for (int iu = 0; iu < nu; ++iu) {
      double worst = -std::numeric_limits<double>::infinity();
      int bv = 0;
      for (int iv = 0; iv < nv; ++iv) {
        double val = lookup[static_cast<size_t>(iu * nv + iv)] +
                     tau * spec.stage_cost(spec.actions.u[static_cast<size_t>(iu)],
                                           spec.actions.v[static_cast<size_t>(iv)], t, p1);
        if (val > worst) {
          worst = val;
          bv = iv;
        }
      }
      if (iu == 0 || worst < best_u) {
        best_u = worst;
        bu = iu;
        bv_of_bu = bv;
      }
    }
    row.value[static_cast<size_t>(j)] = best_u;
    row.ustar[static_cast<size_t>(j)] = bu;
    row.vstar[static_cast<size_t>(j)] = bv_of_bu;
  }
  return row;
}

StageValue stage_minimax(const GameSpec& spec, const reach::FeasibilitySet& masks,
                         const std::vector<double>& next_slice, int k, const Vec& x, int belief_node) {
  StageRow row = stage_row(spec, masks, next_slice, k, x);
  return {row.value[static_cast<size_t>(belief_node)], row.ustar[static_cast<size_t>(belief_node)],
          row.vstar[static_cast<size_t>(belief_node)]};
}

std::vector<double> backup_step(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                const std::vector<double>& next_slice, int k, SolveStats* stats) {
  const int nP = spec.belief_count;
  const BeliefGrid grid = spec.belief_grid();
  std::vector<double> ps(static_cast<size_t>(nP));
  for (int j = 0; j < nP; ++j) ps[static_cast<size_t>(j)] = grid.p1(j);
  std::vector<double> out(static_cast<size_t>(spec.lattice.size() * nP));
  std::atomic<long> clipped{0};
  parallel_for(spec.lattice.size(), [&](long s) {
    double* dst = out.data() + static_cast<size_t>(s) * nP;
    if (!masks.at(k, s)) {
      for (int j = 0; j < nP; ++j) dst[j] = spec.cap;
      return;
    }
    SolveStats local;
    StageRow row = stage_row(spec, masks, next_slice, k, spec.lattice.coord(s), stats ? &local : nullptr);
    clipped += local.clipped_successors;
    Hull1D hull(ps, row.value);
    std::vector<double> env = hull.values_at_samples();
    for (int j = 0; j < nP; ++j) dst[j] = env[static_cast<size_t>(j)];
  });
  if (stats) stats->clipped_successors += clipped.load();
  return out;
}

ValueTable solve(const GameSpec& spec, const reach::FeasibilitySet& masks, const SolveOptions& opt,
                 SolveStats* stats) {
  ValueTable table;
  table.steps = spec.time.steps;
  table.tau = spec.time.tau();
  table.cap = spec.cap;
  table.pgrid = spec.belief_grid();
  table.lattice = spec.lattice;
  table.masks = masks;
  table.vals.resize(static_cast<size_t>(spec.time.steps) + 1);

  const int nP = spec.belief_count;
  auto& terminal = table.vals[static_cast<size_t>(spec.time.steps)];
  terminal.assign(static_cast<size_t>(spec.lattice.size() * nP), 0.0);
  for (long s = 0; s < spec.lattice.size(); ++s) {
    Vec x = spec.lattice.coord(s);
    for (int j = 0; j < nP; ++j) {
      double v;
      if (!masks.at(spec.time.steps, s)) {
        v = spec.cap;
      } else {
        v = terminal_value(spec, x, table.pgrid.belief(j));
      }
      terminal[static_cast<size_t>(s) * nP + static_cast<size_t>(j)] = v;
    }
  }
  for (int k = spec.time.steps - 1; k >= 0; --k) {
    table.vals[static_cast<size_t>(k)] =
        backup_step(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, stats);
    if (opt.check_convexity) {
      const auto& slice = table.vals[static_cast<size_t>(k)];
      for (long s = 0; s < spec.lattice.size(); ++s)
        for (int j = 1; j + 1 < nP; ++j) {
          const double* r = slice.data() + static_cast<size_t>(s) * nP;
          if (r[j - 1] + r[j + 1] - 2 * r[j] < -1e-9)
            throw NumericGuardError("belief convexity violated after backup");
        }
    }
  }
  if (stats && opt.compute_isaacs_gap) {
    // max-min vs min-max at a sample of states, coarse diagnostic
    double gap = 0.0;
    const auto& next = table.vals[1];
    const int nv = static_cast<int>(spec.actions.v.size());
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(0, s)) continue;
      StageRow mm = stage_row(spec, masks, next, 0, spec.lattice.coord(s));
      auto succ = successors(spec, masks, 0, spec.lattice.coord(s));
      const double tau = spec.time.tau();
      for (int j = 0; j < nP; ++j) {
        double maximin = -std::numeric_limits<double>::infinity();
        for (int iv = 0; iv < nv; ++iv) {
          double inner = std::numeric_limits<double>::infinity();
          for (size_t iu = 0; iu < spec.actions.u.size(); ++iu) {
            const Successor& sc = succ[iu * static_cast<size_t>(nv) + static_cast<size_t>(iv)];
            double v = spec.cap;
            if (sc.feasible) {
              v = 0;
              for (int c = 0; c < sc.st.m; ++c)
                v += sc.st.w[static_cast<size_t>(c)] *
                     next[static_cast<size_t>(sc.st.idx[static_cast<size_t>(c)]) * nP + static_cast<size_t>(j)];
            }
            v += tau * spec.stage_cost(spec.actions.u[iu], spec.actions.v[static_cast<size_t>(iv)], 0.0,
                                       table.pgrid.p1(j));
            inner = std::min(inner, v);
          }
          maximin = std::max(maximin, inner);
        }
        gap = std::max(gap, mm.value[static_cast<size_t>(j)] - maximin);
      }
    }
    stats->isaacs_gap = gap;
  }
  return table;
}

std::vector<std::vector<double>> solve_complete_info(const GameSpec& spec,
                                                     const reach::FeasibilitySet& masks, int type) {
  const double tau = spec.time.tau();
  std::vector<std::vector<double>> V(static_cast<size_t>(spec.time.steps) + 1,
                                     std::vector<double>(static_cast<size_t>(spec.lattice.size())));
  for (long s = 0; s < spec.lattice.size(); ++s)
    V[static_cast<size_t>(spec.time.steps)][static_cast<size_t>(s)] =
        masks.at(spec.time.steps, s) ? spec.g(spec.lattice.coord(s), type) : spec.cap;
  double p1 = type == 0 ? 1.0 : 0.0;
  for (int k = spec.time.steps - 1; k >= 0; --k) {
    for (long s = 0; s < spec.lattice.size(); ++s) {
      if (!masks.at(k, s)) {
        V[static_cast<size_t>(k)][static_cast<size_t>(s)] = spec.cap;
        continue;
      }
      Vec x = spec.lattice.coord(s);
      auto succ = successors(spec, masks, k, x);
      const int nv = static_cast<int>(spec.actions.v.size());
      double best = std::numeric_limits<double>::infinity();
      for (size_t iu = 0; iu < spec.actions.u.size(); ++iu) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int iv = 0; iv < nv; ++iv) {
          const Successor& sc = succ[iu * static_cast<size_t>(nv) + static_cast<size_t>(iv)];
          double val;
          if (!sc.feasible) {
            val = spec.cap;
          } else {
            val = 0;
            for (int c = 0; c < sc.st.m; ++c)
              val += sc.st.w[static_cast<size_t>(c)] *
                     V[static_cast<size_t>(k) + 1][static_cast<size_t>(sc.st.idx[static_cast<size_t>(c)])];
          }
          val += tau * spec.stage_cost(spec.actions.u[iu], spec.actions.v[static_cast<size_t>(iv)],
                                       spec.time.t(k), p1);
          worst = std::max(worst, val);
        }
        best = std::min(best, worst);
      }
      V[static_cast<size_t>(k)][static_cast<size_t>(s)] = best;
    }
  }
  return V;
}

}  // namespace primal
}  // namespace osig
