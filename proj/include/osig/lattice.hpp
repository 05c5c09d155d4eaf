#pragma once

#include <array>
#include <vector>

#include "osig/types.hpp"

namespace osig {

// Multilinear interpolation stencil: up to 2^d corner nodes with weights.
struct InterpStencil {
  int m = 0;
  std::array<long, 16> idx{};
  std::array<double, 16> w{};
};

// Rectangular state lattice with a bijective node-index <-> coordinate map.
class StateLattice {
 public:
  StateLattice() = default;
  StateLattice(std::vector<double> lo, std::vector<double> hi, std::vector<int> counts);

  int dims() const { return static_cast<int>(n_.size()); }
  long size() const { return total_; }
  int count(int d) const { return n_[static_cast<size_t>(d)]; }
  double lower(int d) const { return lo_[static_cast<size_t>(d)]; }
  double upper(int d) const { return hi_[static_cast<size_t>(d)]; }
  double spacing(int d) const {
    return (hi_[static_cast<size_t>(d)] - lo_[static_cast<size_t>(d)]) / (n_[static_cast<size_t>(d)] - 1);
  }

  Vec coord(long index) const;
  long index(const std::vector<int>& multi) const;
  std::vector<int> multi(long index) const;

  bool in_bounds(const Vec& x, double tol = 1e-9) const;
  // Clamps x componentwise to the box; sets `clipped` when anything moved.
  Vec clamp(const Vec& x, bool* clipped = nullptr) const;
  long nearest(const Vec& x) const;
  InterpStencil stencil(const Vec& x) const;

 private:
  std::vector<double> lo_, hi_;
  std::vector<int> n_;
  std::vector<long> stride_;
  long total_ = 0;
};

// Uniform grid on p[0] for two-type beliefs.
class BeliefGrid {
 public:
  BeliefGrid() = default;
  explicit BeliefGrid(int count);

  int size() const { return n_; }
  double p1(int j) const { return n_ == 1 ? 0.0 : static_cast<double>(j) / (n_ - 1); }
  double spacing() const { return 1.0 / (n_ - 1); }
  Belief belief(int j) const { return Belief({p1(j), 1.0 - p1(j)}); }
  // Nearest grid index; exact hits required by callers should check residual.
  int nearest(double p) const;

 private:
  int n_ = 0;
};

// Uniform 2-D lattice for dual vectors (I = 2).
class DualGrid {
 public:
  DualGrid() = default;
  DualGrid(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> counts);

  long size() const { return static_cast<long>(n_[0]) * n_[1]; }
  int count(int d) const { return n_[static_cast<size_t>(d)]; }
  double lower(int d) const { return lo_[static_cast<size_t>(d)]; }
  double upper(int d) const { return hi_[static_cast<size_t>(d)]; }
  double spacing(int d) const { return (hi_[static_cast<size_t>(d)] - lo_[static_cast<size_t>(d)]) / (n_[static_cast<size_t>(d)] - 1); }

  long index(int i, int j) const { return static_cast<long>(i) * n_[1] + j; }
  std::array<double, 2> coord(long idx) const {
    int i = static_cast<int>(idx / n_[1]), j = static_cast<int>(idx % n_[1]);
    return {lo_[0] + i * spacing(0), lo_[1] + j * spacing(1)};
  }
  bool contains(const DualVector& p, double tol = 1e-9) const {
    return p[0] >= lo_[0] - tol && p[0] <= hi_[0] + tol && p[1] >= lo_[1] - tol && p[1] <= hi_[1] + tol;
  }
  // Bilinear stencil; coordinates are clamped by at most `slack` before
  // interpolation, beyond that a NumericGuardError is thrown.
  InterpStencil stencil(double a, double b, double slack = 0.0) const;

 private:
  std::array<double, 2> lo_{}, hi_{};
  std::array<int, 2> n_{};
};

}  // namespace osig
