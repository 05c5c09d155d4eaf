#pragma once

#include <array>
#include <vector>

#include "osig/lattice.hpp"
#include "osig/types.hpp"

namespace osig {

// Face of a lower convex envelope containing a query point: 1 vertex when
// the query sits on the hull, 2 for a segment, 3 for a triangle. Vertex
// coordinates are always input sample points.
struct HullFace {
  int m = 0;
  std::array<long, 3> index{};
  std::array<std::array<double, 2>, 3> point{};
  std::array<double, 3> value{};
  std::array<double, 3> bary{};
  double hull_value = 0.0;
};

// Mixing weights and splitting points shared by both players' strategies.
struct SplitPlan {
  std::vector<double> lambda;
  std::vector<std::vector<double>> points;  // belief weights or dual coordinates
  std::vector<long> indices;                // lattice index of each splitting point
  std::vector<double> values;               // hull value at each point
  std::vector<int> actions;                 // minimax action id attached per point
  double hull_value = 0.0;

  void validate(const std::vector<double>& query, double tol = 1e-9) const;
};

// Piecewise-linear lower convex hull of samples with strictly increasing
// coordinates (monotone chain, lower part).
class Hull1D {
 public:
  Hull1D(std::vector<double> xs, std::vector<double> fs);

  double eval(double x) const;
  std::vector<double> values_at_samples() const;
  const std::vector<long>& vertices() const { return verts_; }
  bool on_hull(long sample_index, double tol = 1e-9) const;
  // Face containing the query; a query equal to an on-hull sample yields m=1.
  HullFace face(double x) const;
  // Hull slope at x; interior kinks use the subgradient interval midpoint,
  // endpoints the one-sided slope.
  double slope_at(double x) const;

  double domain_lo() const { return xs_.front(); }
  double domain_hi() const { return xs_.back(); }

 private:
  int segment_of(double x) const;
  std::vector<double> xs_, fs_;
  std::vector<long> verts_;
  double scale_ = 1.0;
};

Hull1D lower_hull_1d(const std::vector<double>& xs, const std::vector<double>& fs);

// Lower convex envelope of values sampled on a rectangular lattice,
// realized through supporting-plane queries on the lifted point set (every
// supporting plane is a downward-facing facet of the lifted hull).
class GridHull2D {
 public:
  // with_envelope = false defers all work to face()/eval() queries; node
  // accessors are then unavailable. Strategy synthesis uses the lazy form.
  explicit GridHull2D(DualGrid grid, std::vector<double> values, bool with_envelope = true);

  const DualGrid& grid() const { return grid_; }
  const std::vector<double>& node_values() const {
    if (env_.empty()) throw std::logic_error("envelope not computed for this hull");
    return env_;
  }
  double sample(long idx) const { return f_[static_cast<size_t>(idx)]; }
  bool is_vertex(long idx) const;
  double eval(double a, double b) const;
  HullFace face(double a, double b) const;

 private:
  struct Plane {
    double a = 0, b = 0, c = 0;
    double at(double x, double y) const { return a * x + b * y + c; }
  };
  Plane support(double qa, double qb) const;
  HullFace face_from_plane(const Plane& pl, double qa, double qb) const;

  DualGrid grid_;
  std::vector<double> f_, env_;
  double scale_ = 1.0;
};

SplitPlan split_at(const Hull1D& hull, double query);
SplitPlan split_at(const GridHull2D& hull, const DualVector& query);

// Convexification error bound for lattice spacing d_P and Lipschitz
// constant L of the pre-hull data.
double vex_error_bound(double d_P, double L);

}  // namespace osig
