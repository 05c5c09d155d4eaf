#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "osig/lattice.hpp"
#include "osig/types.hpp"

namespace osig {

// Finite discretized action sets for both players.
struct ActionSet {
  std::vector<Vec> u;  // player 1
  std::vector<Vec> v;  // player 2
  std::vector<double> u_lo, u_hi, v_lo, v_hi;

  void validate() const;
};

enum class DynamicsFamily {
  kSingleIntegrator,   // state = (x_1 dims driven by u, then dims driven by v)
  kDoubleIntegrator,   // per-axis (pos, vel) blocks per player, controls are accelerations
  kAffine,             // xdot = A x + Bu u + Bv v
  kTree,               // tabular successor map (sequential games embedded on a line)
};

struct AffineDynamics {
  Eigen::MatrixXd A, Bu, Bv;
};

// next[state_node][u][v] -> state_node, used with a 1-D index lattice.
struct TreeDynamics {
  std::vector<std::vector<std::vector<int>>> next;
};

enum class StageCostKind {
  kNone,
  kQuadratic,  // sum_i au_i u_i^2 - sum_j bv_j v_j^2, common knowledge
  kHexner,     // belief-expected quadratic tracking cost with weights d1(t), d2(t)
};

struct StageCost {
  StageCostKind kind = StageCostKind::kNone;
  std::vector<double> au, bv;              // quadratic weights
  std::vector<double> d1, d2;              // hexner weights sampled on a fine grid over [0, T]
  double sample_dt = 0.0;

  double d_at(const std::vector<double>& d, double t) const;
  bool belief_dependent() const { return kind == StageCostKind::kHexner; }
};

enum class ConstraintKind { kNone, kGapAbs, kPairDistance, kHalfplane };

struct Constraint {
  ConstraintKind kind = ConstraintKind::kNone;
  double radius = 0.0;
  std::vector<int> dims_a, dims_b;  // pair_distance: position dims of each player
  std::vector<double> normal;       // halfplane: c(x) = normal.x - offset
  double offset = 0.0;
};

enum class TerminalKind { kCorridor, kBeerQuiche, kHexnerTargets, kZero, kCustom };

struct TerminalPayoff {
  TerminalKind kind = TerminalKind::kZero;
  // corridor / hexner_targets parameters
  double target = 0.5;
  double weight_own = 1.0, weight_opp = 1.0;
  std::vector<std::vector<double>> table;  // beer-quiche leaf table, [type][state_node]
  std::function<double(const Vec&, int)> custom;
};

// Immutable description of one game instance. All solver modules read it
// concurrently; nothing here mutates after construction.
struct GameSpec {
  int state_dim = 1;
  DynamicsFamily family = DynamicsFamily::kSingleIntegrator;
  int u_dims = 1, v_dims = 1;  // single/double integrator splits
  std::optional<AffineDynamics> affine;
  std::shared_ptr<const TreeDynamics> tree;

  ActionSet actions;
  int num_types = 2;
  TerminalPayoff terminal;
  StageCost stage;
  Constraint constraint;

  TimeGrid time;
  StateLattice lattice;
  int belief_count = 101;
  Belief prior = Belief::uniform(2);
  double cap = 0.0;  // finite stand-in for the infinite feasibility penalty

  std::array<double, 2> dual_lo{-14.0, -14.0};
  std::array<double, 2> dual_hi{14.0, 14.0};
  std::array<int, 2> dual_counts{29, 29};

  std::string name;

  // --- evaluation helpers ---
  double g(const Vec& x, int type) const;
  double c(const Vec& x) const;
  // Common-knowledge stage payoff; belief enters only for the hexner family.
  double stage_cost(const Vec& u, const Vec& v, double t, double p1) const;
  // Stage payoff actually accrued by a realized type (differs from
  // stage_cost only for the hexner family).
  double realized_stage_cost(const Vec& u, const Vec& v, double t, int type) const;

  BeliefGrid belief_grid() const { return BeliefGrid(belief_count); }
  DualGrid dual_grid() const { return DualGrid(dual_lo, dual_hi, dual_counts); }
  double payoff_bound() const;  // max over lattice nodes and types of |g| plus T*max|l|
  void validate() const;
};

struct StepResult {
  Vec x;
  bool clipped = false;
};

// Explicit Euler step x' = x + tau f(x,u,v), clamped to the lattice box.
StepResult dynamics_step(const GameSpec& spec, const Vec& x, const Vec& u, const Vec& v, double tau);

// Lipschitz constant of f in x declared per dynamics family (tree excluded).
double dynamics_lipschitz(const GameSpec& spec);

// --- builtin game constructors ---

struct CorridorParams {
  double target = 0.6;
  double weight_own = 1.0, weight_opp = 1.0;
  double radius = 0.0;  // 0 disables the constraint
  double effort_u = 0.0, effort_v = 0.0;
  double speed = 1.0;
  int nodes = 11;
  int steps = 3;
  double horizon = 0.6;
  int belief_count = 101;
  double prior1 = 0.5;
  double cap = 50.0;
};

// Two players on a line; type flips the sign of the common target.
GameSpec make_corridor(const CorridorParams& p);

// Zero-sum beer-quiche as a two-step tree game (payoffs negated so that
// player 1 is the minimizer; the oracle module holds the adapter back to
// the classic maximizer table).
GameSpec make_beer_quiche();

// Stateless quadratic-tracking game driven by weight curves d1, d2.
GameSpec make_hexner_stateless(int steps, std::vector<double> d1, std::vector<double> d2,
                               double horizon, int belief_count = 101, int action_count = 101);

}  // namespace osig
