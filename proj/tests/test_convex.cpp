#include <cmath>
#include <random>

#include "doctest.h"
#include "osig/convex.hpp"

using namespace osig;

namespace {

std::vector<double> grid01(int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<size_t>(i)] = static_cast<double>(i) / (n - 1);
  return xs;
}

// Exhaustive lower-envelope value at a 2-D query: minimize over convex
// combinations of one, two, or three sample nodes hitting the query.
double brute_envelope(const DualGrid& g, const std::vector<double>& f, double qx, double qy) {
  double best = std::numeric_limits<double>::infinity();
  long n = g.size();
  for (long i = 0; i < n; ++i) {
    auto a = g.coord(i);
    if (std::abs(a[0] - qx) < 1e-12 && std::abs(a[1] - qy) < 1e-12)
      best = std::min(best, f[static_cast<size_t>(i)]);
    for (long j = i + 1; j < n; ++j) {
      auto b = g.coord(j);
      double ex = b[0] - a[0], ey = b[1] - a[1];
      double len2 = ex * ex + ey * ey;
      double crossq = (qx - a[0]) * ey - (qy - a[1]) * ex;
      if (std::abs(crossq) < 1e-12 && len2 > 0) {
        double t = ((qx - a[0]) * ex + (qy - a[1]) * ey) / len2;
        if (t >= -1e-12 && t <= 1 + 1e-12)
          best = std::min(best, (1 - t) * f[static_cast<size_t>(i)] + t * f[static_cast<size_t>(j)]);
      }
      for (long k = j + 1; k < n; ++k) {
        auto c = g.coord(k);
        double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        if (std::abs(det) < 1e-12) continue;
        double l1 = ((qx - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (qy - a[1])) / det;
        double l2 = ((b[0] - a[0]) * (qy - a[1]) - (qx - a[0]) * (b[1] - a[1])) / det;
        double l0 = 1 - l1 - l2;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12)
          best = std::min(best, l0 * f[static_cast<size_t>(i)] + l1 * f[static_cast<size_t>(j)] +
                                    l2 * f[static_cast<size_t>(k)]);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("1-D hull flattens a concave tent") {
  Hull1D h = lower_hull_1d({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK(h.vertices().size() == 2);
  CHECK(h.eval(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("1-D hull reproduces the classic signaling-game root value") {
  // classic maximizer stage data negated into the minimizer convention
  std::vector<double> ps = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  std::vector<double> vs = {1.0, 1.0 / 3.0, -2.0 / 3.0, -1.0};
  Hull1D h = lower_hull_1d(ps, vs);
  CHECK(-h.eval(1.0 / 3.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  SplitPlan plan = split_at(h, 1.0 / 3.0);
  REQUIRE(plan.lambda.size() == 2);
  CHECK(plan.points[0][0] == doctest::Approx(0.0));
  CHECK(plan.points[1][0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(plan.lambda[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plan.lambda[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("convex data is its own hull") {
  auto xs = grid01(17);
  std::vector<double> fs;
  for (double x : xs) fs.push_back((x - 0.3) * (x - 0.3));
  Hull1D h = lower_hull_1d(xs, fs);
  auto env = h.values_at_samples();
  for (size_t i = 0; i < xs.size(); ++i) CHECK(env[i] == doctest::Approx(fs[i]).epsilon(1e-14));
}

TEST_CASE("1-D hull rejects bad input") {
  CHECK_THROWS_AS(lower_hull_1d({0.0, 0.0, 1.0}, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(lower_hull_1d({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("hull face at a vertex is a single point") {
  Hull1D h = lower_hull_1d({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  SplitPlan plan = split_at(h, 1.0);
  CHECK(plan.lambda.size() == 1);
  CHECK(plan.lambda[0] == doctest::Approx(1.0));
}

TEST_CASE("flattened quadratic splits to the extreme vertices") {
  auto xs = grid01(101);
  std::vector<double> fs;
  for (double x : xs) fs.push_back(4.0 * x * (1.0 - x) * 0.5);  // concave, hull is the zero line
  Hull1D h = lower_hull_1d(xs, fs);
  SplitPlan plan = split_at(h, 0.3);
  REQUIRE(plan.lambda.size() == 2);
  CHECK(plan.points[0][0] == doctest::Approx(0.0));
  CHECK(plan.points[1][0] == doctest::Approx(1.0));
  CHECK(plan.lambda[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(plan.lambda[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("2-D hull: affine data is exact") {
  DualGrid g({-1, -1}, {1, 1}, {5, 5});
  std::vector<double> f(static_cast<size_t>(g.size()));
  for (long i = 0; i < g.size(); ++i) {
    auto q = g.coord(i);
    f[static_cast<size_t>(i)] = 0.7 * q[0] - 1.3 * q[1] + 0.25;
  }
  GridHull2D h(g, f);
  for (long i = 0; i < g.size(); ++i) {
    CHECK(std::abs(h.node_values()[static_cast<size_t>(i)] - f[static_cast<size_t>(i)]) <= 1e-10);
    CHECK(h.is_vertex(i));
  }
}

TEST_CASE("2-D hull: convex bowl is exact") {
  DualGrid g({-1, -1}, {1, 1}, {7, 7});
  std::vector<double> f(static_cast<size_t>(g.size()));
  for (long i = 0; i < g.size(); ++i) {
    auto q = g.coord(i);
    f[static_cast<size_t>(i)] = q[0] * q[0] + q[1] * q[1];
  }
  GridHull2D h(g, f);
  for (long i = 0; i < g.size(); ++i)
    CHECK(h.node_values()[static_cast<size_t>(i)] == doctest::Approx(f[static_cast<size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("2-D hull: saddle center matches the enumeration oracle") {
  DualGrid g({-1, -1}, {1, 1}, {3, 3});
  std::vector<double> f(static_cast<size_t>(g.size()));
  for (long i = 0; i < g.size(); ++i) {
    auto q = g.coord(i);
    f[static_cast<size_t>(i)] = -q[0] * q[1];
  }
  GridHull2D h(g, f);
  double oracle = brute_envelope(g, f, 0.0, 0.0);
  CHECK(oracle == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(h.eval(0.0, 0.0) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("2-D hull matches enumeration on random data") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DualGrid g({-1, -1}, {1, 1}, {4, 4});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> f(static_cast<size_t>(g.size()));
    for (auto& v : f) v = U(rng);
    GridHull2D h(g, f);
    for (long i = 0; i < g.size(); ++i) {
      auto q = g.coord(i);
      double oracle = brute_envelope(g, f, q[0], q[1]);
      CHECK(h.node_values()[static_cast<size_t>(i)] == doctest::Approx(oracle).epsilon(1e-8));
    }
    // off-node probes
    for (int probe = 0; probe < 8; ++probe) {
      double qx = U(rng), qy = U(rng);
      CHECK(h.eval(qx, qy) == doctest::Approx(brute_envelope(g, f, qx, qy)).epsilon(1e-8));
    }
  }
}

TEST_CASE("2-D split reconstructs the query and its value") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DualGrid g({-1, -1}, {1, 1}, {6, 6});
  std::vector<double> f(static_cast<size_t>(g.size()));
  for (auto& v : f) v = U(rng);
  GridHull2D h(g, f);
  for (int probe = 0; probe < 20; ++probe) {
    DualVector q(U(rng), U(rng));
    SplitPlan plan = split_at(h, q);
    double val = 0, qx = 0, qy = 0;
    for (size_t j = 0; j < plan.lambda.size(); ++j) {
      val += plan.lambda[j] * plan.values[j];
      qx += plan.lambda[j] * plan.points[j][0];
      qy += plan.lambda[j] * plan.points[j][1];
    }
    CHECK(qx == doctest::Approx(q[0]).epsilon(1e-9));
    CHECK(qy == doctest::Approx(q[1]).epsilon(1e-9));
    CHECK(val == doctest::Approx(h.eval(q[0], q[1])).epsilon(1e-8));
  }
}

TEST_CASE("hull invariants: dominance, convexity, idempotence") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  auto xs = grid01(41);
  std::vector<double> fs;
  for (size_t i = 0; i < xs.size(); ++i) fs.push_back(U(rng));
  Hull1D h = lower_hull_1d(xs, fs);
  auto env = h.values_at_samples();
  for (size_t i = 0; i < xs.size(); ++i) CHECK(env[i] <= fs[i] + 1e-12);
  for (long v : h.vertices()) CHECK(env[static_cast<size_t>(v)] == doctest::Approx(fs[static_cast<size_t>(v)]).epsilon(1e-14));
  for (size_t i = 1; i + 1 < xs.size(); ++i)
    CHECK(env[i - 1] + env[i + 1] - 2 * env[i] >= -1e-10);
  Hull1D h2 = lower_hull_1d(xs, env);
  auto env2 = h2.values_at_samples();
  for (size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(env2[i] - env[i]) <= 1e-12);

  DualGrid g({-1, -1}, {1, 1}, {6, 6});
  std::vector<double> f2(static_cast<size_t>(g.size()));
  for (auto& v : f2) v = U(rng);
  GridHull2D H(g, f2);
  const auto& e1 = H.node_values();
  for (long i = 0; i < g.size(); ++i) CHECK(e1[static_cast<size_t>(i)] <= f2[static_cast<size_t>(i)] + 1e-12);
  for (int a = 0; a < 6; ++a)
    for (int b = 1; b + 1 < 6; ++b) {
      CHECK(e1[static_cast<size_t>(g.index(a, b - 1))] + e1[static_cast<size_t>(g.index(a, b + 1))] -
                2 * e1[static_cast<size_t>(g.index(a, b))] >=
            -1e-10);
      CHECK(e1[static_cast<size_t>(g.index(b - 1, a))] + e1[static_cast<size_t>(g.index(b + 1, a))] -
                2 * e1[static_cast<size_t>(g.index(b, a))] >=
            -1e-10);
    }
  GridHull2D H2(g, e1);
  for (long i = 0; i < g.size(); ++i)
    CHECK(std::abs(H2.node_values()[static_cast<size_t>(i)] - e1[static_cast<size_t>(i)]) <= 1e-12);
}

TEST_CASE("empirical convexification error bound") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double L = 5.0;
  for (int trial = 0; trial < 20; ++trial) {
    // random piecewise-linear Lipschitz function on the fine grid
    auto xf = grid01(401);
    std::vector<double> ff(xf.size());
    ff[0] = U(rng);
    for (size_t i = 1; i < xf.size(); ++i)
      ff[i] = ff[i - 1] + (2 * U(rng) - 1) * L * (xf[i] - xf[i - 1]);
    Hull1D fine(xf, ff);
    auto fine_env = fine.values_at_samples();
    const int n = 21;
    const double d_P = 1.0 / (n - 1);
    auto xc = grid01(n);
    std::vector<double> fc;
    for (double x : xc) fc.push_back(ff[static_cast<size_t>(std::lround(x * 400))]);
    Hull1D coarse(xc, fc);
    double err = 0.0;
    for (size_t i = 0; i < xf.size(); ++i)
      err = std::max(err, coarse.eval(xf[i]) - fine_env[i]);
    CHECK(err <= vex_error_bound(d_P, L) + 1e-12);
  }
}

TEST_CASE("vex_error_bound formula") {
  CHECK(vex_error_bound(0.01, 10.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(vex_error_bound(0.37, 0.0) == 0.0);
  CHECK(vex_error_bound(0.005, 10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS(vex_error_bound(0.0, 1.0));
}
