#include "osig/dual.hpp"

#include <atomic>
#include <cmath>

#include "osig/parallel.hpp"

namespace osig {
namespace dual {

namespace {

struct Successor {
  bool feasible = false;
  InterpStencil st;
};

// Same separate-region approximation as the primal side: trapped lookups
// read the negative cap, feasible interpolation renormalizes over feasible
// cell corners.
std::vector<Successor> successors(const GameSpec& spec, const reach::FeasibilitySet& masks, int k,
                                  const Vec& x) {
  const double tau = spec.time.tau();
  std::vector<Successor> out;
  out.reserve(spec.actions.u.size() * spec.actions.v.size());
  for (const Vec& u : spec.actions.u)
    for (const Vec& v : spec.actions.v) {
      StepResult sr = dynamics_step(spec, x, u, v, tau);
      Successor s;
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

double max_stage_cost(const GameSpec& spec) {
  double m = 0.0;
  for (const Vec& u : spec.actions.u)
    for (const Vec& v : spec.actions.v) m = std::max(m, std::abs(spec.stage_cost(u, v, 0.0, 0.0)));
  return m;
}

void require_type_independent(const GameSpec& spec) {
  if (spec.stage.belief_dependent())
    throw NumericGuardError("dual backup requires a type-independent instantaneous payoff");
}

}  // namespace

double dual_terminal(const GameSpec& spec, const Vec& x, const DualVector& phat) {
  if (spec.c(x) > 0.0) return -spec.cap;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.num_types; ++i) best = std::max(best, phat[i] - spec.g(x, i));
  return std::clamp(best, -spec.cap, spec.cap);
}

DualStageRow dual_stage_row(const GameSpec& spec, const reach::FeasibilitySet& masks,
                            const std::vector<double>& next_slice, int k, const Vec& x,
                            DualSolveStats* stats) {
  require_type_independent(spec);
  const DualGrid grid = spec.dual_grid();
  const long nH = grid.size();
  const int nu = static_cast<int>(spec.actions.u.size());
  const int nv = static_cast<int>(spec.actions.v.size());
  const double tau = spec.time.tau();
  const double t = spec.time.t(k);
  const double slack = tau * max_stage_cost(spec) + 1e-12;
  auto succ = successors(spec, masks, k, x);

  // per action pair: the scalar stage cost shifting the dual vector
  std::vector<double> lvals(static_cast<size_t>(nu * nv));
  for (int iu = 0; iu < nu; ++iu)
    for (int iv = 0; iv < nv; ++iv)
      lvals[static_cast<size_t>(iu * nv + iv)] =
          spec.stage_cost(spec.actions.u[static_cast<size_t>(iu)], spec.actions.v[static_cast<size_t>(iv)], t, 0.0);

  DualStageRow row;
  row.value.assign(static_cast<size_t>(nH), 0.0);
  row.vstar.assign(static_cast<size_t>(nH), 0);
  row.ustar.assign(static_cast<size_t>(nH), 0);
  for (long h = 0; h < nH; ++h) {
    auto q = grid.coord(h);
    double best_v = 0.0;
    int bv = 0, bu_of_bv = 0;
    for (int iv = 0; iv < nv; ++iv) {
      double inner = -std::numeric_limits<double>::infinity();
      int bu = 0;
      for (int iu = 0; iu < nu; ++iu) {
        const int a = iu * nv + iv;
        const Successor& s = succ[static_cast<size_t>(a)];
        double val;
        if (!s.feasible) {
          val = -spec.cap;
        } else {
          double shift = tau * lvals[static_cast<size_t>(a)];
          InterpStencil hs = grid.stencil(q[0] - shift, q[1] - shift, slack);
          if (stats && shift != 0.0) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (int c = 0; c < hs.m; ++c) {
              for (int sc = 0; sc < s.st.m; ++sc) {
                double corner = next_slice[static_cast<size_t>(s.st.idx[static_cast<size_t>(sc)]) * nH +
                                           static_cast<size_t>(hs.idx[static_cast<size_t>(c)])];
                lo = std::min(lo, corner);
                hi = std::max(hi, corner);
              }
            }
            stats->max_shift_cell_osc = std::max(stats->max_shift_cell_osc, hi - lo);
          }
          val = 0.0;
          for (int sc = 0; sc < s.st.m; ++sc) {
            const double* base = next_slice.data() + static_cast<size_t>(s.st.idx[static_cast<size_t>(sc)]) * nH;
            double acc = 0.0;
            for (int c = 0; c < hs.m; ++c) acc += hs.w[static_cast<size_t>(c)] * base[hs.idx[static_cast<size_t>(c)]];
            val += s.st.w[static_cast<size_t>(sc)] * acc;
          }
        }
        if (val > inner) {
          inner = val;
          bu = iu;
        }
      }
      if (iv == 0 || inner < best_v) {
        best_v = inner;
        bv = iv;
        bu_of_bv = bu;
      }
    }
    row.value[static_cast<size_t>(h)] = best_v;
    row.vstar[static_cast<size_t>(h)] = bv;
    row.ustar[static_cast<size_t>(h)] = bu_of_bv;
  }
  return row;
}

DualStageValue dual_stage_minimax(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                  const std::vector<double>& next_slice, int k, const Vec& x,
                                  const DualVector& phat) {
  require_type_independent(spec);
  const DualGrid grid = spec.dual_grid();
  if (!grid.contains(phat)) throw NumericGuardError("dual vector outside lattice; widen dual_lattice bounds");
  const long nH = grid.size();
  const double tau = spec.time.tau();
  const double t = spec.time.t(k);
  const double slack = tau * max_stage_cost(spec) + 1e-12;
  auto succ = successors(spec, masks, k, x);
  const int nv = static_cast<int>(spec.actions.v.size());

  DualStageValue out{0.0, 0, 0};
  bool first = true;
  for (int iv = 0; iv < nv; ++iv) {
    double inner = -std::numeric_limits<double>::infinity();
    int bu = 0;
    for (size_t iu = 0; iu < spec.actions.u.size(); ++iu) {
      const int a = static_cast<int>(iu) * nv + iv;
      const Successor& s = succ[static_cast<size_t>(a)];
      double val;
      if (!s.feasible) {
        val = -spec.cap;
      } else {
        double shift = tau * spec.stage_cost(spec.actions.u[iu], spec.actions.v[static_cast<size_t>(iv)], t, 0.0);
        InterpStencil hs = grid.stencil(phat[0] - shift, phat[1] - shift, slack);
        val = 0.0;
        for (int sc = 0; sc < s.st.m; ++sc) {
          const double* base = next_slice.data() + static_cast<size_t>(s.st.idx[static_cast<size_t>(sc)]) * nH;
          double acc = 0.0;
          for (int c = 0; c < hs.m; ++c) acc += hs.w[static_cast<size_t>(c)] * base[hs.idx[static_cast<size_t>(c)]];
          val += s.st.w[static_cast<size_t>(sc)] * acc;
        }
      }
      if (val > inner) {
        inner = val;
        bu = static_cast<int>(iu);
      }
    }
    if (first || inner < out.value) {
      out.value = inner;
      out.vstar = iv;
      out.ustar = bu;
      first = false;
    }
  }
  return out;
}

std::vector<double> dual_backup_step(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                     const std::vector<double>& next_slice, int k,
                                     DualSolveStats* stats) {
  const DualGrid grid = spec.dual_grid();
  const long nH = grid.size();
  std::vector<double> out(static_cast<size_t>(spec.lattice.size() * nH));
  std::atomic<long> clamped{0};
  parallel_for(spec.lattice.size(), [&](long s) {
    double* dst = out.data() + static_cast<size_t>(s) * nH;
    if (!masks.at(k, s)) {
      for (long h = 0; h < nH; ++h) dst[h] = -spec.cap;
      return;
    }
    DualStageRow row = dual_stage_row(spec, masks, next_slice, k, spec.lattice.coord(s), stats);
    GridHull2D hull(grid, row.value);
    const auto& env = hull.node_values();
    for (long h = 0; h < nH; ++h) dst[h] = env[static_cast<size_t>(h)];
  });
  if (stats) stats->clamped_shifts += clamped.load();
  return out;
}

ConjugateTable dual_solve(const GameSpec& spec, const reach::FeasibilitySet& masks,
                          DualSolveStats* stats) {
  require_type_independent(spec);
  ConjugateTable table;
  table.steps = spec.time.steps;
  table.tau = spec.time.tau();
  table.cap = spec.cap;
  table.grid = spec.dual_grid();
  table.lattice = spec.lattice;
  table.masks = masks;
  table.vals.resize(static_cast<size_t>(spec.time.steps) + 1);

  const long nH = table.grid.size();
  auto& terminal = table.vals[static_cast<size_t>(spec.time.steps)];
  terminal.assign(static_cast<size_t>(spec.lattice.size() * nH), 0.0);
  for (long s = 0; s < spec.lattice.size(); ++s) {
    Vec x = spec.lattice.coord(s);
    for (long h = 0; h < nH; ++h) {
      double v;
      if (!masks.at(spec.time.steps, s)) {
        v = -spec.cap;
      } else {
        auto q = table.grid.coord(h);
        v = dual_terminal(spec, x, DualVector(q[0], q[1]));
      }
      terminal[static_cast<size_t>(s) * nH + static_cast<size_t>(h)] = v;
    }
  }
  for (int k = spec.time.steps - 1; k >= 0; --k)
    table.vals[static_cast<size_t>(k)] =
        dual_backup_step(spec, masks, table.vals[static_cast<size_t>(k) + 1], k, stats);
  return table;
}

DualVector init_dual(const primal::ValueTable& table, const GameSpec& spec, const Vec& x,
                     const Belief& p) {
  if (spec.num_types != 2) throw std::invalid_argument("init_dual requires two types");
  long s = spec.lattice.nearest(x);
  const int nP = table.pgrid.size();
  std::vector<double> ps(static_cast<size_t>(nP)), vs(static_cast<size_t>(nP));
  for (int j = 0; j < nP; ++j) {
    ps[static_cast<size_t>(j)] = table.pgrid.p1(j);
    vs[static_cast<size_t>(j)] = table.at(0, s, j);
  }
  Hull1D hull(ps, vs);
  double p1 = p[0];
  double V = hull.eval(p1);
  double slope = hull.slope_at(p1);
  return DualVector(V + slope * (1.0 - p1), V - slope * p1);
}

}  // namespace dual
}  // namespace osig
