#include "osig/oracles.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "osig/convex.hpp"

namespace osig {
namespace oracles {

RiccatiCurve riccati_integrate(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& R, const Eigen::MatrixXd& KT,
                               const Eigen::VectorXd& z, double horizon, int grid_steps) {
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("R must be positive definite");
  Eigen::MatrixXd Rinv = llt.solve(Eigen::MatrixXd::Identity(R.rows(), R.cols()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(KT);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("K(T) must be positive semidefinite");

  const int n = static_cast<int>(A.rows());
  const double h = horizon / grid_steps;
  RiccatiCurve out;
  out.t.resize(static_cast<size_t>(grid_steps) + 1);
  out.K.resize(static_cast<size_t>(grid_steps) + 1);
  out.Phi.resize(static_cast<size_t>(grid_steps) + 1);
  out.d.resize(static_cast<size_t>(grid_steps) + 1);

  auto kdot = [&](const Eigen::MatrixXd& K) -> Eigen::MatrixXd {
    return -A.transpose() * K - K * A + K * B * Rinv * B.transpose() * K;
  };
  auto phidot = [&](const Eigen::MatrixXd& P) -> Eigen::MatrixXd { return A * P; };

  Eigen::MatrixXd K = KT, Phi = Eigen::MatrixXd::Identity(n, n);
  out.t[static_cast<size_t>(grid_steps)] = horizon;
  out.K[static_cast<size_t>(grid_steps)] = K;
  out.Phi[static_cast<size_t>(grid_steps)] = Phi;
  for (int i = grid_steps - 1; i >= 0; --i) {
    // RK4 backward in time, step -h
    Eigen::MatrixXd k1 = kdot(K);
    Eigen::MatrixXd k2 = kdot(K - 0.5 * h * k1);
    Eigen::MatrixXd k3 = kdot(K - 0.5 * h * k2);
    Eigen::MatrixXd k4 = kdot(K - h * k3);
    K = K - (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    Eigen::MatrixXd p1 = phidot(Phi);
    Eigen::MatrixXd p2 = phidot(Phi - 0.5 * h * p1);
    Eigen::MatrixXd p3 = phidot(Phi - 0.5 * h * p2);
    Eigen::MatrixXd p4 = phidot(Phi - h * p3);
    Phi = Phi - (h / 6.0) * (p1 + 2 * p2 + 2 * p3 + p4);
    out.t[static_cast<size_t>(i)] = i * h;
    out.K[static_cast<size_t>(i)] = K;
    out.Phi[static_cast<size_t>(i)] = Phi;
  }
  for (int i = 0; i <= grid_steps; ++i) {
    const Eigen::MatrixXd& Ki = out.K[static_cast<size_t>(i)];
    const Eigen::MatrixXd& Pi = out.Phi[static_cast<size_t>(i)];
    Eigen::VectorXd w = B.transpose() * Ki.transpose() * Pi * z;
    out.d[static_cast<size_t>(i)] = w.dot(Rinv * w);
  }
  return out;
}

double critical_time(const std::vector<double>& d1, const std::vector<double>& d2,
                     const std::vector<double>& t) {
  if (d1.size() != d2.size() || d1.size() != t.size() || t.size() < 2)
    throw std::invalid_argument("critical_time needs matching sampled curves");
  double cum = 0.0, best = 0.0, best_t = t.front();
  for (size_t i = 1; i < t.size(); ++i) {
    double f0 = d1[i - 1] - d2[i - 1], f1 = d1[i] - d2[i];
    cum += 0.5 * (f0 + f1) * (t[i] - t[i - 1]);
    if (cum < best - 1e-15) {
      best = cum;
      best_t = t[i];
    }
  }
  return best_t;
}

FootballParams football_params() {
  FootballParams fp;
  // state per player: (pos_x, vel_x, pos_y, vel_y); target on the y axis.
  fp.A = Eigen::MatrixXd::Zero(4, 4);
  fp.A(0, 1) = 1.0;
  fp.A(2, 3) = 1.0;
  fp.B = Eigen::MatrixXd::Zero(4, 2);
  fp.B(1, 0) = 1.0;
  fp.B(3, 1) = 1.0;
  fp.R1 = Eigen::Vector2d(0.05, 0.025).asDiagonal();
  fp.R2 = Eigen::Vector2d(0.05, 0.1).asDiagonal();
  // terminal weight on positions; 25/36 calibrates the critical time of the
  // published matchup
  fp.KT = Eigen::MatrixXd::Zero(4, 4);
  fp.KT(0, 0) = 25.0 / 36.0;
  fp.KT(2, 2) = 25.0 / 36.0;
  fp.z = Eigen::VectorXd::Zero(4);
  fp.z(2) = 1.0;
  fp.horizon = 1.0;
  return fp;
}

HexnerStateless::HexnerStateless(std::vector<double> t, std::vector<double> d1,
                                 std::vector<double> d2)
    : t_(std::move(t)), d1_(std::move(d1)), d2_(std::move(d2)) {
  if (t_.size() < 2 || d1_.size() != t_.size() || d2_.size() != t_.size())
    throw std::invalid_argument("curves must share a grid with >= 2 samples");
  diff_.resize(t_.size());
  for (size_t i = 0; i < t_.size(); ++i) diff_[i] = d1_[i] - d2_[i];
  cum_.assign(t_.size(), 0.0);
  for (size_t i = 1; i < t_.size(); ++i)
    cum_[i] = cum_[i - 1] + 0.5 * (diff_[i] + diff_[i - 1]) * (t_[i] - t_[i - 1]);
  sufmin_.assign(t_.size(), 0.0);
  sufmin_.back() = cum_.back();
  for (size_t i = t_.size() - 1; i-- > 0;) sufmin_[i] = std::min(cum_[i], sufmin_[i + 1]);
  tr_ = t_[static_cast<size_t>(std::min_element(cum_.begin(), cum_.end()) - cum_.begin())];

  // sign-change roots of d1 - d2, refined by bisection on the linear
  // interpolant; the leading sign must be negative and signs must alternate
  double tol = 1e-10 * t_.back();
  int expected_sign = -1;
  for (size_t i = 0; i + 1 < t_.size(); ++i) {
    double a = diff_[i], b = diff_[i + 1];
    if (a == 0.0 && i == 0) continue;
    if ((a < 0) == (b < 0) || b == 0.0) continue;
    double lo = t_[i], hi = t_[i + 1], fa = a;
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      double fm = a + (b - a) * (mid - t_[i]) / (t_[i + 1] - t_[i]);
      if ((fm < 0) == (fa < 0))
        lo = mid;
      else
        hi = mid;
    }
    roots_.push_back(0.5 * (lo + hi));
    if ((a < 0 ? -1 : 1) != expected_sign)
      throw std::invalid_argument("d1 - d2 sign pattern does not alternate starting negative");
    expected_sign = -expected_sign;
  }
}

double HexnerStateless::cum(double t) const {
  double rel = t / t_.back() * (static_cast<double>(t_.size()) - 1);
  long i = std::clamp(static_cast<long>(std::floor(rel)), 0L, static_cast<long>(t_.size()) - 2);
  double f = std::clamp(rel - i, 0.0, 1.0);
  return cum_[static_cast<size_t>(i)] * (1 - f) + cum_[static_cast<size_t>(i) + 1] * f;
}

double HexnerStateless::dtilde(double t) const {
  double rel = t / t_.back() * (static_cast<double>(t_.size()) - 1);
  long i = std::clamp(static_cast<long>(std::ceil(rel - 1e-12)), 0L, static_cast<long>(t_.size()) - 1);
  double here = cum(t);
  return std::min(0.0, sufmin_[static_cast<size_t>(i)] - here);
}

double HexnerStateless::conjugate(double t, const DualVector& phat) const {
  double D = dtilde(t);
  double s = phat[0] - phat[1];
  if (D >= -1e-14) return std::max(phat[0], phat[1]);
  if (s >= -4.0 * D) return phat[0];
  if (s <= 4.0 * D) return phat[1];
  double r = 1.0 - s / (4.0 * D);
  return phat[1] - D * r * r;
}

int HexnerStateless::expected_reveal_step(int L) const {
  // discrete recursion with left-endpoint stage weights, matching the
  // lattice solver's backup
  double T = t_.back();
  double tau = T / L;
  auto d_at = [&](double t) {
    double rel = t / T * (static_cast<double>(t_.size()) - 1);
    long i = std::clamp(static_cast<long>(std::floor(rel)), 0L, static_cast<long>(t_.size()) - 2);
    double f = std::clamp(rel - i, 0.0, 1.0);
    return diff_[static_cast<size_t>(i)] * (1 - f) + diff_[static_cast<size_t>(i) + 1] * f;
  };
  std::vector<double> dt(static_cast<size_t>(L) + 1, 0.0);
  for (int k = L - 1; k >= 0; --k)
    dt[static_cast<size_t>(k)] = std::min(0.0, dt[static_cast<size_t>(k) + 1] + tau * d_at(k * tau));
  for (int k = 0; k < L; ++k)
    if (dt[static_cast<size_t>(k) + 1] + tau * d_at(k * tau) > 1e-13) return k;
  return L;
}

GameSpec hexner_stateless_spec(const HexnerStateless& hx, int steps, int belief_count,
                               int action_count) {
  // resample onto a dense uniform grid so stage-cost lookups stay cheap
  const int n = 2001;
  const auto& tg = hx.grid();
  std::vector<double> d1(n), d2(n);
  auto interp = [&](const std::vector<double>& d, double t) {
    double rel = t / tg.back() * (static_cast<double>(tg.size()) - 1);
    long i = std::clamp(static_cast<long>(std::floor(rel)), 0L, static_cast<long>(tg.size()) - 2);
    double f = std::clamp(rel - i, 0.0, 1.0);
    return d[static_cast<size_t>(i)] * (1 - f) + d[static_cast<size_t>(i) + 1] * f;
  };
  for (int i = 0; i < n; ++i) {
    double t = hx.horizon() * i / (n - 1);
    d1[static_cast<size_t>(i)] = interp(hx.d1(), t);
    d2[static_cast<size_t>(i)] = interp(hx.d2(), t);
  }
  return make_hexner_stateless(steps, std::move(d1), std::move(d2), hx.horizon(), belief_count,
                               action_count);
}

namespace beer_quiche {

double value_max(double pT) { return pT < 2.0 / 3.0 ? 2.5 * pT - 1.0 : pT; }

Split split_at(double pT) {
  Split s;
  if (pT >= 2.0 / 3.0 || pT <= 0.0) {
    s.split = false;
    return s;
  }
  s.split = true;
  // vertices pT = 0 and pT = 2/3; lambda_low solves the mixture
  s.lambda_low = 1.0 - pT / (2.0 / 3.0);
  s.v_low = value_max(0.0);
  s.v_high = value_max(2.0 / 3.0);
  return s;
}

DualVector dual_max(double pT) {
  double slope = pT < 2.0 / 3.0 ? 2.5 : 1.0;
  double V = value_max(pT);
  // concave-conjugate subgradient: phat . p = V, phat[0] - phat[1] = slope
  return DualVector(V + slope * (1.0 - pT), V - slope * pT);
}

double pr_beer_given_tough() { return 1.0; }
double pr_quiche_given_weak() { return 0.75; }
double p2_bully_prob_after_beer() { return 0.5; }
double p2_bully_prob_after_quiche() { return 1.0; }

}  // namespace beer_quiche

namespace {

struct TreeNode {
  bool feasible = false;
  std::vector<double> values;  // over the fine belief grid, convexified
};

TreeNode bf_recurse(const GameSpec& spec, const Vec& x, int k, const BeliefGrid& fine,
                    std::vector<double>& lipschitz) {
  TreeNode node;
  const int nF = fine.size();
  if (spec.c(x) > 0.0) {
    node.feasible = false;
    node.values.assign(static_cast<size_t>(nF), spec.cap);
    return node;
  }
  if (k == spec.time.steps) {
    node.feasible = true;
    node.values.resize(static_cast<size_t>(nF));
    for (int j = 0; j < nF; ++j) {
      double p1 = fine.p1(j);
      node.values[static_cast<size_t>(j)] = p1 * spec.g(x, 0) + (1 - p1) * spec.g(x, 1);
    }
    return node;
  }
  const double tau = spec.time.tau();
  const double t = spec.time.t(k);
  const int nu = static_cast<int>(spec.actions.u.size());
  const int nv = static_cast<int>(spec.actions.v.size());
  std::vector<TreeNode> children(static_cast<size_t>(nu * nv));
  for (int iu = 0; iu < nu; ++iu)
    for (int iv = 0; iv < nv; ++iv) {
      Vec xn = dynamics_step(spec, x, spec.actions.u[static_cast<size_t>(iu)],
                             spec.actions.v[static_cast<size_t>(iv)], tau)
                   .x;
      children[static_cast<size_t>(iu * nv + iv)] = bf_recurse(spec, xn, k + 1, fine, lipschitz);
    }
  // feasible iff some u keeps every v-response feasible
  node.feasible = false;
  for (int iu = 0; iu < nu && !node.feasible; ++iu) {
    bool safe = true;
    for (int iv = 0; iv < nv; ++iv)
      if (!children[static_cast<size_t>(iu * nv + iv)].feasible) safe = false;
    if (safe) node.feasible = true;
  }
  if (!node.feasible) {
    node.values.assign(static_cast<size_t>(nF), spec.cap);
    return node;
  }
  std::vector<double> stage(static_cast<size_t>(nF));
  for (int j = 0; j < nF; ++j) {
    double p1 = fine.p1(j);
    double best = std::numeric_limits<double>::infinity();
    for (int iu = 0; iu < nu; ++iu) {
      double worst = -std::numeric_limits<double>::infinity();
      for (int iv = 0; iv < nv; ++iv) {
        const TreeNode& ch = children[static_cast<size_t>(iu * nv + iv)];
        double val = (ch.feasible ? ch.values[static_cast<size_t>(j)] : spec.cap) +
                     tau * spec.stage_cost(spec.actions.u[static_cast<size_t>(iu)],
                                           spec.actions.v[static_cast<size_t>(iv)], t, p1);
        worst = std::max(worst, val);
      }
      best = std::min(best, worst);
    }
    stage[static_cast<size_t>(j)] = best;
  }
  double lip = 0.0;
  for (int j = 1; j < nF; ++j)
    lip = std::max(lip, std::abs(stage[static_cast<size_t>(j)] - stage[static_cast<size_t>(j) - 1]) / fine.spacing());
  lipschitz[static_cast<size_t>(k)] = std::max(lipschitz[static_cast<size_t>(k)], lip);

  std::vector<double> ps(static_cast<size_t>(nF));
  for (int j = 0; j < nF; ++j) ps[static_cast<size_t>(j)] = fine.p1(j);
  Hull1D hull(ps, stage);
  node.values = hull.values_at_samples();
  return node;
}

}  // namespace

double BruteForceResult::value_at(double p1) const {
  BeliefGrid fine(fine_count);
  double rel = p1 * (fine_count - 1);
  int i = std::clamp(static_cast<int>(std::floor(rel)), 0, fine_count - 2);
  double f = std::clamp(rel - i, 0.0, 1.0);
  return root[static_cast<size_t>(i)] * (1 - f) + root[static_cast<size_t>(i) + 1] * f;
}

BruteForceResult brute_force_value(const GameSpec& spec, const Vec& x0, int fine_factor,
                                   int max_depth) {
  if (spec.actions.u.size() * spec.actions.v.size() > 16)
    throw std::invalid_argument("brute force size guard: |U| * |V| <= 16");
  if (spec.time.steps > max_depth || spec.time.steps > 3)
    throw std::invalid_argument("brute force size guard: L <= 3");
  BruteForceResult out;
  out.fine_count = (spec.belief_count - 1) * fine_factor + 1;
  BeliefGrid fine(out.fine_count);
  out.lipschitz.assign(static_cast<size_t>(spec.time.steps), 0.0);
  TreeNode root = bf_recurse(spec, x0, 0, fine, out.lipschitz);
  out.root = std::move(root.values);
  out.root_feasible = root.feasible;
  return out;
}

}  // namespace oracles
}  // namespace osig
