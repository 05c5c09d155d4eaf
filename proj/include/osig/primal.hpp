#pragma once

#include "osig/convex.hpp"
#include "osig/game.hpp"
#include "osig/reach.hpp"

namespace osig {
namespace primal {

// Primal value table: for each timestep a dense array over
// (state node x belief node), convex along the belief axis, with
// masked-infeasible states pinned at +cap.
struct ValueTable {
  int steps = 0;
  double tau = 0.0, cap = 0.0;
  BeliefGrid pgrid;
  StateLattice lattice;
  std::vector<std::vector<double>> vals;  // vals[k][state * nP + j]
  reach::FeasibilitySet masks;

  double at(int k, long state, int j) const {
    return vals[static_cast<size_t>(k)][static_cast<size_t>(state) * pgrid.size() + static_cast<size_t>(j)];
  }
  const double* row(int k, long state) const {
    return vals[static_cast<size_t>(k)].data() + static_cast<size_t>(state) * pgrid.size();
  }
};

struct SolveStats {
  long clipped_successors = 0;
  double isaacs_gap = 0.0;  // filled when requested
};

struct SolveOptions {
  bool compute_isaacs_gap = false;
  bool check_convexity = true;
};

double terminal_value(const GameSpec& spec, const Vec& x, const Belief& p);

// Stage values min_u max_v [V_next(x', p_j) + tau * l] at one state across
// all belief nodes, with the optimizing action pair per node.
struct StageRow {
  std::vector<double> value;
  std::vector<int> ustar, vstar;
};
StageRow stage_row(const GameSpec& spec, const reach::FeasibilitySet& masks,
                   const std::vector<double>& next_slice, int k, const Vec& x,
                   SolveStats* stats = nullptr);

// Single-node variant returning (value, u*, v*) for belief node j.
struct StageValue {
  double value;
  int ustar, vstar;
};
StageValue stage_minimax(const GameSpec& spec, const reach::FeasibilitySet& masks,
                         const std::vector<double>& next_slice, int k, const Vec& x, int belief_node);

std::vector<double> backup_step(const GameSpec& spec, const reach::FeasibilitySet& masks,
                                const std::vector<double>& next_slice, int k, SolveStats* stats = nullptr);

ValueTable solve(const GameSpec& spec, const reach::FeasibilitySet& masks,
                 const SolveOptions& opt = {}, SolveStats* stats = nullptr);

// Min-max backup of a single complete-information game (no belief, no hull);
// used by the reduction checks at pure beliefs.
std::vector<std::vector<double>> solve_complete_info(const GameSpec& spec,
                                                     const reach::FeasibilitySet& masks, int type);

}  // namespace primal
}  // namespace osig
