#pragma once

#include <Eigen/Dense>

#include "osig/game.hpp"

namespace osig {
namespace oracles {

// Backward Riccati flow for one linear-quadratic player:
//   Kdot = -A^T K - K A + K B R^{-1} B^T K,  K(T) given,
//   Phidot = A Phi,                          Phi(T) = I,
//   d(t) = z^T Phi^T K B R^{-1} B^T K Phi z.
struct RiccatiCurve {
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> K, Phi;
  std::vector<double> d;
};

RiccatiCurve riccati_integrate(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& R, const Eigen::MatrixXd& KT,
                               const Eigen::VectorXd& z, double horizon, int grid_steps);

// argmin over the grid of the cumulative integral of d1 - d2 (trapezoid),
// earliest index on ties.
double critical_time(const std::vector<double>& d1, const std::vector<double>& d2,
                     const std::vector<double>& t);

// Simplified football matchup: per-axis double integrators, terminal
// position tracking, control weights R_A = diag(0.05, 0.025) and
// R_D = diag(0.05, 0.1).
struct FootballParams {
  Eigen::MatrixXd A, B, R1, R2, KT;
  Eigen::VectorXd z;
  double horizon = 1.0;
};
FootballParams football_params();

// Closed forms for the stateless two-type tracking game with weight curves
// d1, d2: value 4 p (1-p) Dtilde(t), its conjugate, and the non-revealing
// control 1 - 2p before the critical time.
class HexnerStateless {
 public:
  HexnerStateless(std::vector<double> t, std::vector<double> d1, std::vector<double> d2);

  double horizon() const { return t_.back(); }
  double t_r() const { return tr_; }
  const std::vector<double>& roots() const { return roots_; }
  double dtilde(double t) const;  // min over s in [t, T] of the integral of (d1 - d2)
  double value(double t, double p1) const { return 4.0 * p1 * (1.0 - p1) * dtilde(t); }
  double conjugate(double t, const DualVector& phat) const;
  double nonrevealing_action(double p1) const { return 1.0 - 2.0 * p1; }
  DualVector init_dual(double p1) const {
    double D0 = dtilde(0.0);
    return DualVector(4.0 * (1 - p1) * (1 - p1) * D0, 4.0 * p1 * p1 * D0);
  }
  // expected reveal step on an L-step grid: first k whose stage data turns
  // concave under the discrete recursion with left-endpoint weights
  int expected_reveal_step(int L) const;

  const std::vector<double>& grid() const { return t_; }
  const std::vector<double>& d1() const { return d1_; }
  const std::vector<double>& d2() const { return d2_; }

 private:
  double cum(double t) const;  // integral of (d1 - d2) from 0 to t
  std::vector<double> t_, d1_, d2_, diff_, cum_, sufmin_;
  std::vector<double> roots_;
  double tr_ = 0.0;
};

// Makes the stateless game spec wired to sampled d curves.
GameSpec hexner_stateless_spec(const HexnerStateless& hx, int steps, int belief_count = 101,
                               int action_count = 101);

// Zero-sum beer-quiche closed forms. The classic game is stated for a
// maximizing informed player; the solver convention is minimizing, so the
// adapter negates values and dual vectors.
namespace beer_quiche {

// classic (maximizer) root value at belief pT of the tough type
double value_max(double pT);
inline double value_min(double pT) { return -value_max(pT); }

struct Split {
  bool split = false;
  double lambda_low = 0.0;  // weight on pT = 0
  double v_low = 0.0, v_high = 0.0;
};
Split split_at(double pT);

// classic-convention dual vector at the root (subgradient of the concave value)
DualVector dual_max(double pT);
inline DualVector to_solver(const DualVector& d) { return DualVector(-d[0], -d[1]); }
inline DualVector to_classic(const DualVector& d) { return DualVector(-d[0], -d[1]); }

// equilibrium conditionals and responses at pT = 1/3
double pr_beer_given_tough();
double pr_quiche_given_weak();
double p2_bully_prob_after_beer();
double p2_bully_prob_after_quiche();

}  // namespace beer_quiche

// Exact min-max backup over the reachable state tree with belief hulls on a
// grid `fine_factor` times finer than the solver's; the independent ground
// truth for lattice-solver equivalence checks.
struct BruteForceResult {
  int fine_count = 0;
  std::vector<double> root;         // convexified values on the fine belief grid
  std::vector<double> lipschitz;    // per backup step, max |dV/dp| of the stage data
  bool root_feasible = true;

  double value_at(double p1) const;
};

BruteForceResult brute_force_value(const GameSpec& spec, const Vec& x0, int fine_factor = 10,
                                   int max_depth = 3);

}  // namespace oracles
}  // namespace osig
