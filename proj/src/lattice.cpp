#include "osig/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace osig {

StateLattice::StateLattice(std::vector<double> lo, std::vector<double> hi, std::vector<int> counts)
    : lo_(std::move(lo)), hi_(std::move(hi)), n_(std::move(counts)) {
  if (lo_.size() != hi_.size() || lo_.size() != n_.size() || lo_.empty())
    throw std::invalid_argument("lattice bounds/counts mismatch");
  for (size_t d = 0; d < n_.size(); ++d) {
    if (n_[d] < 2) throw std::invalid_argument("lattice needs >= 2 nodes per dimension");
    if (!(hi_[d] > lo_[d])) throw std::invalid_argument("lattice upper bound must exceed lower");
  }
  stride_.assign(n_.size(), 1);
  for (int d = static_cast<int>(n_.size()) - 2; d >= 0; --d)
    stride_[static_cast<size_t>(d)] = stride_[static_cast<size_t>(d) + 1] * n_[static_cast<size_t>(d) + 1];
  total_ = stride_[0] * n_[0];
}

Vec StateLattice::coord(long index) const {
  Vec x(dims());
  for (int d = 0; d < dims(); ++d) {
    long i = (index / stride_[static_cast<size_t>(d)]) % n_[static_cast<size_t>(d)];
    x[d] = lo_[static_cast<size_t>(d)] + i * spacing(d);
  }
  return x;
}

long StateLattice::index(const std::vector<int>& multi) const {
  long idx = 0;
  for (int d = 0; d < dims(); ++d) idx += static_cast<long>(multi[static_cast<size_t>(d)]) * stride_[static_cast<size_t>(d)];
  return idx;
}

std::vector<int> StateLattice::multi(long index) const {
  std::vector<int> m(static_cast<size_t>(dims()));
  for (int d = 0; d < dims(); ++d)
    m[static_cast<size_t>(d)] = static_cast<int>((index / stride_[static_cast<size_t>(d)]) % n_[static_cast<size_t>(d)]);
  return m;
}

bool StateLattice::in_bounds(const Vec& x, double tol) const {
  if (x.size() != dims()) return false;
  for (int d = 0; d < dims(); ++d)
    if (x[d] < lo_[static_cast<size_t>(d)] - tol || x[d] > hi_[static_cast<size_t>(d)] + tol) return false;
  return true;
}

Vec StateLattice::clamp(const Vec& x, bool* clipped) const {
  Vec y = x;
  bool c = false;
  for (int d = 0; d < dims(); ++d) {
    double v = std::clamp(y[d], lo_[static_cast<size_t>(d)], hi_[static_cast<size_t>(d)]);
    if (v != y[d]) c = true;
    y[d] = v;
  }
  if (clipped) *clipped = c;
  return y;
}

long StateLattice::nearest(const Vec& x) const {
  long idx = 0;
  for (int d = 0; d < dims(); ++d) {
    double rel = (x[d] - lo_[static_cast<size_t>(d)]) / spacing(d);
    int i = static_cast<int>(std::lround(rel));
    i = std::clamp(i, 0, n_[static_cast<size_t>(d)] - 1);
    idx += static_cast<long>(i) * stride_[static_cast<size_t>(d)];
  }
  return idx;
}

InterpStencil StateLattice::stencil(const Vec& x) const {
  const int d = dims();
  std::array<int, 8> base{};
  std::array<double, 8> frac{};
  for (int k = 0; k < d; ++k) {
    double rel = (x[k] - lo_[static_cast<size_t>(k)]) / spacing(k);
    int i = static_cast<int>(std::floor(rel));
    i = std::clamp(i, 0, n_[static_cast<size_t>(k)] - 2);
    base[static_cast<size_t>(k)] = i;
    frac[static_cast<size_t>(k)] = std::clamp(rel - i, 0.0, 1.0);
  }
  InterpStencil s;
  s.m = 1 << d;
  for (int corner = 0; corner < s.m; ++corner) {
    long idx = 0;
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      int bit = (corner >> k) & 1;
      idx += static_cast<long>(base[static_cast<size_t>(k)] + bit) * stride_[static_cast<size_t>(k)];
      w *= bit ? frac[static_cast<size_t>(k)] : 1.0 - frac[static_cast<size_t>(k)];
    }
    s.idx[static_cast<size_t>(corner)] = idx;
    s.w[static_cast<size_t>(corner)] = w;
  }
  return s;
}

BeliefGrid::BeliefGrid(int count) : n_(count) {
  if (count < 2) throw std::invalid_argument("belief grid needs >= 2 nodes");
}

int BeliefGrid::nearest(double p) const {
  int j = static_cast<int>(std::lround(p * (n_ - 1)));
  return std::clamp(j, 0, n_ - 1);
}

DualGrid::DualGrid(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> counts)
    : lo_(lo), hi_(hi), n_(counts) {
  for (int d = 0; d < 2; ++d) {
    if (n_[static_cast<size_t>(d)] < 2) throw std::invalid_argument("dual grid needs >= 2 nodes per axis");
    if (!(hi_[static_cast<size_t>(d)] > lo_[static_cast<size_t>(d)]))
      throw std::invalid_argument("dual grid bounds inverted");
  }
}

InterpStencil DualGrid::stencil(double a, double b, double slack) const {
  std::array<double, 2> q{a, b};
  for (int d = 0; d < 2; ++d) {
    double excess = std::max(lo_[static_cast<size_t>(d)] - q[static_cast<size_t>(d)],
                             q[static_cast<size_t>(d)] - hi_[static_cast<size_t>(d)]);
    if (excess > slack + 1e-12)
      throw NumericGuardError("dual vector left the lattice; widen dual_lattice bounds");
    q[static_cast<size_t>(d)] = std::clamp(q[static_cast<size_t>(d)], lo_[static_cast<size_t>(d)], hi_[static_cast<size_t>(d)]);
  }
  InterpStencil s;
  s.m = 4;
  std::array<int, 2> base{};
  std::array<double, 2> frac{};
  for (int d = 0; d < 2; ++d) {
    double rel = (q[static_cast<size_t>(d)] - lo_[static_cast<size_t>(d)]) / spacing(d);
    int i = std::clamp(static_cast<int>(std::floor(rel)), 0, n_[static_cast<size_t>(d)] - 2);
    base[static_cast<size_t>(d)] = i;
    frac[static_cast<size_t>(d)] = std::clamp(rel - i, 0.0, 1.0);
  }
  int c = 0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj) {
      s.idx[static_cast<size_t>(c)] = index(base[0] + di, base[1] + dj);
      s.w[static_cast<size_t>(c)] = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]);
      ++c;
    }
  return s;
}

}  // namespace osig
