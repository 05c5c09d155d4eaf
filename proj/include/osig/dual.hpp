#pragma once

#include "osig/convex.hpp"
#include "osig/game.hpp"
#include "osig/primal.hpp"
#include "osig/reach.hpp"

namespace osig {
namespace dual {

// Conjugate value table over (state node x dual-vector node), convex along
// both dual axes, masked-infeasible states pinned at -cap.
struct ConjugateTable {
  int steps = 0;
  double tau = 0.0, cap = 0.0;
  DualGrid grid;
  StateLattice lattice;
  std::vector<std::vector<double>> vals;  // vals[k][state * nHat + idx]
  reach::FeasibilitySet masks;

  double at(int k, long state, long idx) const {
    return vals[static_cast<size_t>(k)][static_cast<size_t>(state) * grid.size() + static_cast<size_t>(idx)];
  }
  const double* row(int k, long state) const {
    return vals[static_cast<size_t>(k)].data() + static_cast<size_t>(state) * grid.size();
  }
};

struct DualSolveStats {
  long clamped_shifts = 0;       // boundary reads pulled back onto the lattice
  double max_shift_cell_osc = 0; // interpolation overestimate bound seen
};

double dual_terminal(const GameSpec& spec, const Vec& x, const DualVector& phat);

struct DualStageRow {
  std::vector<double> value;
  std::vector<int> vstar, ustar;  // P2 minimizer and P1's best reply
};
// Stage values min_v max_u V*(t_{k+1}, x', phat - tau l) at one state across
// all dual-lattice nodes.
DualStageRow dual_stage_row(const GameSpec& spec, const reach::FeasibilitySet& masks,
                            const std::vector<double>& next_slice, int k, const Vec& x,
                            DualSolveStats* stats = nullptr);

struct DualStageValue {
  double value;
  int vstar, ustar;
};
DualStageValue dual_stage_minimax(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                  const std::vector<double>& next_slice, int k, const Vec& x,
                                  const DualVector& phat);

std::vector<double> dual_backup_step(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                     const std::vector<double>& next_slice, int k,
                                     DualSolveStats* stats = nullptr);

ConjugateTable dual_solve(const GameSpec& spec, const reach::FeasibilitySet& masks,
                          DualSolveStats* stats = nullptr);

// Initial dual vector from the hull slope of the primal value at t = 0:
// phat = (V + s(1 - p[0]), V - s p[0]) with s the hull segment slope, and
// the subgradient interval midpoint at kinks.
DualVector init_dual(const primal::ValueTable& table, const GameSpec& spec, const Vec& x,
                     const Belief& p);

}  // namespace dual
}  // namespace osig
