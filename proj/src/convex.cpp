#include "osig/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace osig {

namespace {

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

}  // namespace

void SplitPlan::validate(const std::vector<double>& query, double tol) const {
  double s = 0.0;
  for (double l : lambda) {
    if (l < -1e-10) throw NumericGuardError("split weights must be nonnegative");
    s += l;
  }
  if (std::abs(s - 1.0) > 1e-10) throw NumericGuardError("split weights must sum to 1");
  for (size_t d = 0; d < query.size(); ++d) {
    double rec = 0.0;
    for (size_t j = 0; j < lambda.size(); ++j) rec += lambda[j] * points[j][d];
    if (std::abs(rec - query[d]) > tol) throw NumericGuardError("split does not reconstruct the query point");
  }
}

Hull1D::Hull1D(std::vector<double> xs, std::vector<double> fs) : xs_(std::move(xs)), fs_(std::move(fs)) {
  if (xs_.size() != fs_.size() || xs_.size() < 2)
    throw std::invalid_argument("lower_hull_1d needs >= 2 samples");
  double vscale = 1.0, dscale = std::abs(xs_.back() - xs_.front());
  for (size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(fs_[i]))
      throw std::invalid_argument("lower_hull_1d needs finite samples");
    if (i > 0 && !(xs_[i] > xs_[i - 1]))
      throw std::invalid_argument("lower_hull_1d needs strictly increasing coordinates");
    vscale = std::max(vscale, std::abs(fs_[i]));
  }
  scale_ = std::max(vscale, 1.0);
  const double tol = 1e-12 * std::max(1.0, dscale) * scale_;
  verts_.clear();
  for (long i = 0; i < static_cast<long>(xs_.size()); ++i) {
    while (verts_.size() >= 2) {
      long a = verts_[verts_.size() - 2], b = verts_.back();
      if (cross(xs_[static_cast<size_t>(a)], fs_[static_cast<size_t>(a)], xs_[static_cast<size_t>(b)],
                fs_[static_cast<size_t>(b)], xs_[static_cast<size_t>(i)], fs_[static_cast<size_t>(i)]) <= tol)
        verts_.pop_back();
      else
        break;
    }
    verts_.push_back(i);
  }
}

int Hull1D::segment_of(double x) const {
  if (x < xs_.front() - 1e-9 || x > xs_.back() + 1e-9)
    throw std::invalid_argument("hull query outside domain");
  int lo = 0, hi = static_cast<int>(verts_.size()) - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (xs_[static_cast<size_t>(verts_[static_cast<size_t>(mid)])] <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double Hull1D::eval(double x) const {
  int s = segment_of(x);
  long a = verts_[static_cast<size_t>(s)], b = verts_[static_cast<size_t>(s) + 1];
  double xa = xs_[static_cast<size_t>(a)], xb = xs_[static_cast<size_t>(b)];
  double t = (x - xa) / (xb - xa);
  return fs_[static_cast<size_t>(a)] * (1 - t) + fs_[static_cast<size_t>(b)] * t;
}

std::vector<double> Hull1D::values_at_samples() const {
  std::vector<double> out(xs_.size());
  size_t seg = 0;
  for (size_t i = 0; i < xs_.size(); ++i) {
    while (seg + 2 < verts_.size() && xs_[static_cast<size_t>(verts_[seg + 1])] <= xs_[i]) ++seg;
    long a = verts_[seg], b = verts_[seg + 1];
    double xa = xs_[static_cast<size_t>(a)], xb = xs_[static_cast<size_t>(b)];
    double t = (xs_[i] - xa) / (xb - xa);
    out[i] = fs_[static_cast<size_t>(a)] * (1 - t) + fs_[static_cast<size_t>(b)] * t;
  }
  return out;
}

bool Hull1D::on_hull(long i, double tol) const {
  return eval(xs_[static_cast<size_t>(i)]) >= fs_[static_cast<size_t>(i)] - tol * scale_;
}

HullFace Hull1D::face(double x) const {
  HullFace f;
  f.hull_value = eval(x);
  // exact sample hit that lies on the hull collapses to a single point
  for (size_t i = 0; i < xs_.size(); ++i) {
    if (std::abs(xs_[i] - x) <= 1e-12 * std::max(1.0, std::abs(xs_.back() - xs_.front())) &&
        on_hull(static_cast<long>(i))) {
      f.m = 1;
      f.index[0] = static_cast<long>(i);
      f.point[0] = {xs_[i], 0.0};
      f.value[0] = fs_[i];
      f.bary[0] = 1.0;
      return f;
    }
  }
  int s = segment_of(x);
  long a = verts_[static_cast<size_t>(s)], b = verts_[static_cast<size_t>(s) + 1];
  double xa = xs_[static_cast<size_t>(a)], xb = xs_[static_cast<size_t>(b)];
  double t = (x - xa) / (xb - xa);
  f.m = 2;
  f.index = {a, b, 0};
  f.point[0] = {xa, 0.0};
  f.point[1] = {xb, 0.0};
  f.value = {fs_[static_cast<size_t>(a)], fs_[static_cast<size_t>(b)], 0.0};
  f.bary = {1 - t, t, 0.0};
  return f;
}

double Hull1D::slope_at(double x) const {
  auto seg_slope = [&](int s) {
    long a = verts_[static_cast<size_t>(s)], b = verts_[static_cast<size_t>(s) + 1];
    return (fs_[static_cast<size_t>(b)] - fs_[static_cast<size_t>(a)]) /
           (xs_[static_cast<size_t>(b)] - xs_[static_cast<size_t>(a)]);
  };
  const double tol = 1e-12 * std::max(1.0, std::abs(xs_.back() - xs_.front()));
  for (size_t k = 0; k < verts_.size(); ++k) {
    if (std::abs(xs_[static_cast<size_t>(verts_[k])] - x) <= tol) {
      if (k == 0) return seg_slope(0);
      if (k + 1 == verts_.size()) return seg_slope(static_cast<int>(k) - 1);
      return 0.5 * (seg_slope(static_cast<int>(k) - 1) + seg_slope(static_cast<int>(k)));
    }
  }
  return seg_slope(segment_of(x));
}

Hull1D lower_hull_1d(const std::vector<double>& xs, const std::vector<double>& fs) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i] == xs[i - 1]) throw std::invalid_argument("duplicate coordinates");
  return Hull1D(xs, fs);
}

// ---------------------------------------------------------------------------
// GridHull2D: supporting-plane LP (Seidel, 3 variables) over lifted samples.
// ---------------------------------------------------------------------------

namespace {

using ld = long double;

struct Con3 {
  ld n0, n1, n2, d;
};

struct SeidelCtx {
  std::vector<Con3> cons;    // box first, then samples (shuffled once)
  std::array<ld, 3> obj{};
  ld eps = 1e-11;
  ld big = 1e8;
};

std::array<ld, 2> seidel2(const SeidelCtx& ctx, const std::vector<std::array<ld, 3>>& cons2,
                          ld o0, ld o1) {
  auto pick = [&](ld o) { return o >= 0 ? ctx.big : -ctx.big; };
  std::array<ld, 2> w{pick(o0), pick(o1)};
  for (size_t j = 0; j < cons2.size(); ++j) {
    const auto& cj = cons2[j];
    if (cj[0] * w[0] + cj[1] * w[1] <= cj[2] + ctx.eps) continue;
    // restrict to the line cj.n * w = cj.d
    ld nn = cj[0] * cj[0] + cj[1] * cj[1];
    if (nn <= 0) throw NumericGuardError("degenerate hull constraint");
    ld px = cj[0] * cj[2] / nn, py = cj[1] * cj[2] / nn;
    ld dx = -cj[1], dy = cj[0];
    ld norm = std::sqrt(static_cast<double>(nn));
    dx /= norm;
    dy /= norm;
    ld lo = -4 * ctx.big, hi = 4 * ctx.big;
    for (size_t k = 0; k < j; ++k) {
      const auto& ck = cons2[k];
      ld coef = ck[0] * dx + ck[1] * dy;
      ld rhs = ck[2] - (ck[0] * px + ck[1] * py);
      if (std::abs(static_cast<double>(coef)) < 1e-14) {
        if (rhs < -ctx.eps) throw NumericGuardError("infeasible hull subproblem");
        continue;
      }
      ld bound = rhs / coef;
      if (coef > 0)
        hi = std::min(hi, bound);
      else
        lo = std::max(lo, bound);
    }
    if (lo > hi + ctx.eps) throw NumericGuardError("infeasible hull subproblem");
    ld og = o0 * dx + o1 * dy;
    ld s = og >= 0 ? hi : lo;
    w = {px + s * dx, py + s * dy};
  }
  return w;
}

std::array<ld, 3> seidel3(const SeidelCtx& ctx) {
  auto pick = [&](ld o, ld bound) { return o >= 0 ? bound : -bound; };
  std::array<ld, 3> w{pick(ctx.obj[0], ctx.cons[0].d), pick(ctx.obj[1], ctx.cons[2].d),
                      pick(ctx.obj[2], ctx.cons[4].d)};
  for (size_t i = 0; i < ctx.cons.size(); ++i) {
    const auto& ci = ctx.cons[i];
    if (ci.n0 * w[0] + ci.n1 * w[1] + ci.n2 * w[2] <= ci.d + ctx.eps) continue;
    // project onto the plane ci.n * w = ci.d
    ld nn = ci.n0 * ci.n0 + ci.n1 * ci.n1 + ci.n2 * ci.n2;
    std::array<ld, 3> n{ci.n0, ci.n1, ci.n2};
    std::array<ld, 3> w0{n[0] * ci.d / nn, n[1] * ci.d / nn, n[2] * ci.d / nn};
    // orthonormal basis of the null space
    std::array<ld, 3> a{1, 0, 0};
    if (std::abs(static_cast<double>(n[0])) > 0.9 * std::sqrt(static_cast<double>(nn))) a = {0, 1, 0};
    ld an = (a[0] * n[0] + a[1] * n[1] + a[2] * n[2]) / nn;
    std::array<ld, 3> e1{a[0] - an * n[0], a[1] - an * n[1], a[2] - an * n[2]};
    ld e1n = std::sqrt(static_cast<double>(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]));
    for (auto& x : e1) x /= e1n;
    std::array<ld, 3> e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
                         n[0] * e1[1] - n[1] * e1[0]};
    ld e2n = std::sqrt(static_cast<double>(e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]));
    for (auto& x : e2) x /= e2n;

    std::vector<std::array<ld, 3>> cons2;
    cons2.reserve(i);
    for (size_t j = 0; j < i; ++j) {
      const auto& cj = ctx.cons[j];
      ld c0 = cj.n0 * e1[0] + cj.n1 * e1[1] + cj.n2 * e1[2];
      ld c1 = cj.n0 * e2[0] + cj.n1 * e2[1] + cj.n2 * e2[2];
      ld rhs = cj.d - (cj.n0 * w0[0] + cj.n1 * w0[1] + cj.n2 * w0[2]);
      cons2.push_back({c0, c1, rhs});
    }
    ld o0 = ctx.obj[0] * e1[0] + ctx.obj[1] * e1[1] + ctx.obj[2] * e1[2];
    ld o1 = ctx.obj[0] * e2[0] + ctx.obj[1] * e2[1] + ctx.obj[2] * e2[2];
    auto st = seidel2(ctx, cons2, o0, o1);
    for (int k = 0; k < 3; ++k) w[static_cast<size_t>(k)] = w0[static_cast<size_t>(k)] + st[0] * e1[static_cast<size_t>(k)] + st[1] * e2[static_cast<size_t>(k)];
  }
  return w;
}

}  // namespace

GridHull2D::GridHull2D(DualGrid grid, std::vector<double> values, bool with_envelope)
    : grid_(std::move(grid)), f_(std::move(values)) {
  if (static_cast<long>(f_.size()) != grid_.size())
    throw std::invalid_argument("grid/value size mismatch");
  for (double v : f_)
    if (!std::isfinite(v)) throw std::invalid_argument("hull samples must be finite");
  scale_ = 1.0;
  for (double v : f_) scale_ = std::max(scale_, std::abs(v));
  if (!with_envelope) return;

  env_.assign(f_.size(), 0.0);
  // warm scan: reuse the last supporting plane while the node stays inside
  // its face polygon
  Plane pl;
  std::vector<std::array<double, 2>> poly;
  bool have = false;
  auto inside = [&](double x, double y) {
    if (poly.size() < 3) return false;
    for (size_t i = 0; i < poly.size(); ++i) {
      size_t j = (i + 1) % poly.size();
      if (cross(poly[i][0], poly[i][1], poly[j][0], poly[j][1], x, y) < -1e-12) return false;
    }
    return true;
  };
  for (long idx = 0; idx < grid_.size(); ++idx) {
    auto q = grid_.coord(idx);
    if (!have || !inside(q[0], q[1])) {
      pl = support(q[0], q[1]);
      // face polygon = convex hull of the points this plane touches
      std::vector<std::array<double, 2>> pts;
      for (long i = 0; i < grid_.size(); ++i) {
        auto p = grid_.coord(i);
        if (f_[static_cast<size_t>(i)] - pl.at(p[0], p[1]) <= 1e-9 * scale_) pts.push_back({p[0], p[1]});
      }
      std::sort(pts.begin(), pts.end());
      // monotone chain (full hull)
      auto build = [&](bool upper) {
        std::vector<std::array<double, 2>> h;
        for (size_t i = 0; i < pts.size(); ++i) {
          size_t k = upper ? pts.size() - 1 - i : i;
          while (h.size() >= 2 &&
                 cross(h[h.size() - 2][0], h[h.size() - 2][1], h.back()[0], h.back()[1], pts[k][0], pts[k][1]) <= 0)
            h.pop_back();
          h.push_back(pts[k]);
        }
        return h;
      };
      auto lo = build(false), hi = build(true);
      poly = lo;
      poly.pop_back();
      for (size_t i = 0; i + 1 < hi.size(); ++i) poly.push_back(hi[i]);
      have = true;
    }
    env_[static_cast<size_t>(idx)] = std::min(f_[static_cast<size_t>(idx)], pl.at(q[0], q[1]));
  }
}

GridHull2D::Plane GridHull2D::support(double qa, double qb) const {
  if (qa < grid_.lower(0) - 1e-9 || qa > grid_.upper(0) + 1e-9 || qb < grid_.lower(1) - 1e-9 ||
      qb > grid_.upper(1) + 1e-9)
    throw std::invalid_argument("hull query outside domain");
  double span = std::max(grid_.upper(0) - grid_.lower(0), grid_.upper(1) - grid_.lower(1));
  double fmin = *std::min_element(f_.begin(), f_.end());
  double fmax = *std::max_element(f_.begin(), f_.end());
  double M = 4.0 * (fmax - fmin) / std::min(grid_.spacing(0), grid_.spacing(1)) + 1.0;
  double C0 = std::abs(fmax) + std::abs(fmin) + M * (std::abs(grid_.lower(0)) + std::abs(grid_.lower(1)) + span) + 1.0;

  SeidelCtx ctx;
  ctx.obj = {static_cast<ld>(qa), static_cast<ld>(qb), 1.0L};
  ctx.eps = static_cast<ld>(1e-11) * static_cast<ld>(std::max(1.0, C0));
  ctx.big = static_cast<ld>(1e6) * static_cast<ld>(std::max(1.0, C0));
  ctx.cons.reserve(f_.size() + 6);
  ctx.cons.push_back({1, 0, 0, static_cast<ld>(M)});
  ctx.cons.push_back({-1, 0, 0, static_cast<ld>(M)});
  ctx.cons.push_back({0, 1, 0, static_cast<ld>(M)});
  ctx.cons.push_back({0, -1, 0, static_cast<ld>(M)});
  ctx.cons.push_back({0, 0, 1, static_cast<ld>(C0)});
  ctx.cons.push_back({0, 0, -1, static_cast<ld>(C0)});
  std::vector<long> order(f_.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(0x5eed1234u ^ static_cast<unsigned>(f_.size()));
  std::shuffle(order.begin(), order.end(), rng);
  for (long i : order) {
    auto p = grid_.coord(i);
    ctx.cons.push_back({static_cast<ld>(p[0]), static_cast<ld>(p[1]), 1.0L, static_cast<ld>(f_[static_cast<size_t>(i)])});
  }
  auto w = seidel3(ctx);
  Plane pl;
  pl.a = static_cast<double>(w[0]);
  pl.b = static_cast<double>(w[1]);
  pl.c = static_cast<double>(w[2]);
  return pl;
}

bool GridHull2D::is_vertex(long idx) const {
  return node_values()[static_cast<size_t>(idx)] >= f_[static_cast<size_t>(idx)] - 1e-9 * scale_;
}

double GridHull2D::eval(double a, double b) const {
  Plane pl = support(a, b);
  return pl.at(a, b);
}

HullFace GridHull2D::face_from_plane(const Plane& pl, double qa, double qb) const {
  HullFace face;
  face.hull_value = pl.at(qa, qb);
  struct P {
    double x, y, v;
    long idx;
  };
  std::vector<P> act;
  for (long i = 0; i < grid_.size(); ++i) {
    auto p = grid_.coord(i);
    if (f_[static_cast<size_t>(i)] - pl.at(p[0], p[1]) <= 1e-8 * scale_)
      act.push_back({p[0], p[1], f_[static_cast<size_t>(i)], i});
  }
  const double ptol = 1e-9 * std::max(grid_.spacing(0), grid_.spacing(1));
  for (const auto& p : act) {
    if (std::abs(p.x - qa) <= ptol && std::abs(p.y - qb) <= ptol) {
      face.m = 1;
      face.index[0] = p.idx;
      face.point[0] = {p.x, p.y};
      face.value[0] = p.v;
      face.bary[0] = 1.0;
      return face;
    }
  }
  std::sort(act.begin(), act.end(), [](const P& a, const P& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  // convex hull of the active points
  std::vector<P> hull;
  auto build = [&](bool upper) {
    std::vector<P> h;
    for (size_t i = 0; i < act.size(); ++i) {
      size_t k = upper ? act.size() - 1 - i : i;
      while (h.size() >= 2 &&
             cross(h[h.size() - 2].x, h[h.size() - 2].y, h.back().x, h.back().y, act[k].x, act[k].y) <= 1e-14)
        h.pop_back();
      h.push_back(act[k]);
    }
    return h;
  };
  if (act.size() >= 2) {
    auto lo = build(false), hi = build(true);
    hull = lo;
    hull.pop_back();
    for (size_t i = 0; i + 1 < hi.size(); ++i) hull.push_back(hi[i]);
  } else {
    hull = act;
  }
  if (hull.empty()) throw NumericGuardError("empty hull face");
  if (hull.size() == 1) {
    face.m = 1;
    face.index[0] = hull[0].idx;
    face.point[0] = {hull[0].x, hull[0].y};
    face.value[0] = hull[0].v;
    face.bary[0] = 1.0;
    return face;
  }
  // collinear active set, or query on a hull edge: return the segment
  auto try_edge = [&](const P& a, const P& b) -> bool {
    double ex = b.x - a.x, ey = b.y - a.y;
    double len2 = ex * ex + ey * ey;
    if (len2 <= 0) return false;
    double c = cross(a.x, a.y, b.x, b.y, qa, qb);
    if (std::abs(c) > 1e-9 * std::sqrt(len2) * std::max(1.0, std::sqrt(len2))) return false;
    double t = ((qa - a.x) * ex + (qb - a.y) * ey) / len2;
    if (t < -1e-12 || t > 1 + 1e-12) return false;
    t = std::clamp(t, 0.0, 1.0);
    face.m = 2;
    face.index = {a.idx, b.idx, 0};
    face.point[0] = {a.x, a.y};
    face.point[1] = {b.x, b.y};
    face.value = {a.v, b.v, 0.0};
    face.bary = {1 - t, t, 0.0};
    return true;
  };
  bool collinear = true;
  for (size_t i = 2; i < hull.size() && collinear; ++i)
    if (std::abs(cross(hull[0].x, hull[0].y, hull[1].x, hull[1].y, hull[i].x, hull[i].y)) > 1e-12)
      collinear = false;
  if (collinear) {
    // bracket the query along the segment chain
    std::vector<P> line = act;
    for (size_t i = 0; i + 1 < line.size(); ++i)
      if (try_edge(line[i], line[i + 1])) return face;
    if (try_edge(hull.front(), hull.back())) return face;
    throw NumericGuardError("query outside collinear hull face");
  }
  for (size_t i = 0; i < hull.size(); ++i)
    if (try_edge(hull[i], hull[(i + 1) % hull.size()])) return face;
  // fan triangulation from the lexicographically smallest hull vertex
  size_t base = 0;
  for (size_t i = 1; i < hull.size(); ++i)
    if (hull[i].x < hull[base].x || (hull[i].x == hull[base].x && hull[i].y < hull[base].y)) base = i;
  for (size_t k = 1; k + 1 < hull.size(); ++k) {
    const P& A = hull[base];
    const P& B = hull[(base + k) % hull.size()];
    const P& C = hull[(base + k + 1) % hull.size()];
    double det = (B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y);
    if (std::abs(det) < 1e-14) continue;
    double l1 = ((qa - A.x) * (C.y - A.y) - (C.x - A.x) * (qb - A.y)) / det;
    double l2 = ((B.x - A.x) * (qb - A.y) - (qa - A.x) * (B.y - A.y)) / det;
    double l0 = 1.0 - l1 - l2;
    if (l0 >= -1e-10 && l1 >= -1e-10 && l2 >= -1e-10) {
      face.m = 3;
      face.index = {A.idx, B.idx, C.idx};
      face.point[0] = {A.x, A.y};
      face.point[1] = {B.x, B.y};
      face.point[2] = {C.x, C.y};
      face.value = {A.v, B.v, C.v};
      double s = std::max(0.0, l0) + std::max(0.0, l1) + std::max(0.0, l2);
      face.bary = {std::max(0.0, l0) / s, std::max(0.0, l1) / s, std::max(0.0, l2) / s};
      return face;
    }
  }
  throw NumericGuardError("failed to locate hull face for query");
}

HullFace GridHull2D::face(double a, double b) const {
  return face_from_plane(support(a, b), a, b);
}

SplitPlan split_at(const Hull1D& hull, double query) {
  HullFace f = hull.face(query);
  SplitPlan plan;
  plan.hull_value = f.hull_value;
  for (int j = 0; j < f.m; ++j) {
    plan.lambda.push_back(f.bary[static_cast<size_t>(j)]);
    plan.points.push_back({f.point[static_cast<size_t>(j)][0]});
    plan.indices.push_back(f.index[static_cast<size_t>(j)]);
    plan.values.push_back(f.value[static_cast<size_t>(j)]);
  }
  plan.validate({query});
  return plan;
}

SplitPlan split_at(const GridHull2D& hull, const DualVector& query) {
  HullFace f = hull.face(query[0], query[1]);
  SplitPlan plan;
  plan.hull_value = f.hull_value;
  for (int j = 0; j < f.m; ++j) {
    plan.lambda.push_back(f.bary[static_cast<size_t>(j)]);
    plan.points.push_back({f.point[static_cast<size_t>(j)][0], f.point[static_cast<size_t>(j)][1]});
    plan.indices.push_back(f.index[static_cast<size_t>(j)]);
    plan.values.push_back(f.value[static_cast<size_t>(j)]);
  }
  plan.validate({query[0], query[1]});
  return plan;
}

double vex_error_bound(double d_P, double L) {
  if (!(d_P > 0) || L < 0) throw std::invalid_argument("vex_error_bound needs d_P > 0 and L >= 0");
  return 2.0 * d_P * L;
}

}  // namespace osig
