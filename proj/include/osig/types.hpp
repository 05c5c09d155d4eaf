#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace osig {

// Small stack-friendly vector used for states and actions (<= 8 dims).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec to_vec(const std::vector<double>& xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

inline bool all_finite(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}

// Thrown when a numeric guard trips (out-of-range dual reads, degenerate
// hull inputs, size guards). The CLI maps it to exit code 3.
class NumericGuardError : public std::runtime_error {
 public:
  explicit NumericGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

// Point on the type simplex. Entries are >= 0 and sum to 1 within 1e-12.
class Belief {
 public:
  explicit Belief(std::vector<double> w) : w_(std::move(w)) { validate(); }

  static Belief uniform(int n) {
    return Belief(std::vector<double>(static_cast<size_t>(n), 1.0 / n));
  }

  // Floors negative entries at zero and renormalizes. Errors when the mass
  // before normalization is below 1e-9.
  static Belief project(const std::vector<double>& raw);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<size_t>(i)]; }
  const std::vector<double>& weights() const { return w_; }

  bool is_pure(double tol = 1e-9) const {
    for (double x : w_)
      if (x > tol && x < 1.0 - tol) return false;
    return true;
  }

 private:
  void validate() const {
    if (w_.size() < 2) throw std::invalid_argument("belief needs at least two types");
    double s = 0.0;
    for (double x : w_) {
      if (!std::isfinite(x) || x < -1e-15)
        throw std::invalid_argument("belief entries must be finite and nonnegative");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("belief must sum to 1");
  }

  std::vector<double> w_;
};

inline Belief Belief::project(const std::vector<double>& raw) {
  std::vector<double> w(raw.size());
  double s = 0.0;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw std::invalid_argument("belief entries must be finite");
    w[i] = std::max(0.0, raw[i]);
    s += w[i];
  }
  if (s < 1e-9) throw std::invalid_argument("belief mass too small to normalize");
  for (double& x : w) x /= s;
  return Belief(std::move(w));
}

// Info-state vector of the dual game, one entry per type.
struct DualVector {
  std::vector<double> e;

  DualVector() = default;
  explicit DualVector(std::vector<double> v) : e(std::move(v)) {}
  DualVector(double a, double b) : e{a, b} {}

  int size() const { return static_cast<int>(e.size()); }
  double operator[](int i) const { return e[static_cast<size_t>(i)]; }
  double& operator[](int i) { return e[static_cast<size_t>(i)]; }

  void check_finite(double cap) const {
    for (double x : e) {
      if (!std::isfinite(x)) throw std::invalid_argument("dual vector entries must be finite");
      if (std::abs(x) > cap) throw NumericGuardError("dual vector exceeds cap");
    }
  }
};

// Uniform time grid t_k = k*tau with tau = T/L.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;

  TimeGrid() = default;
  TimeGrid(double T, int L) : horizon(T), steps(L) {
    if (L < 1 || !(T > 0)) throw std::invalid_argument("time grid needs T > 0 and L >= 1");
  }
  double tau() const { return horizon / steps; }
  double t(int k) const { return k == steps ? horizon : k * tau(); }
};

}  // namespace osig
