#include "cauchycr/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cauchycr/util.hpp"

namespace cauchycr {

namespace {

// Legendre P_n(t) and P_n'(t) on [-1,1] by the three-term recurrence.
std::array<double, 2> legendre(int n, double t) {
  double p0 = 1.0, p1 = t;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (t * p1 - p0) / (t * t - 1.0);
  return {p1, dp};
}

std::vector<std::array<double, 2>> compute_gauss(int n) {
  std::vector<std::array<double, 2>> rule(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, Newton to machine precision.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, t);
      const double dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, t);
    (void)p;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // map [-1,1] -> [0,1]
    rule[i] = {0.5 * (t + 1.0), 0.5 * w};
  }
  return rule;
}

} // namespace

const std::vector<std::array<double, 2>>& gauss_legendre_unit(int npts) {
  static std::map<int, std::vector<std::array<double, 2>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, compute_gauss(npts)).first;
  return it->second;
}

std::vector<QuadPoint> face_quadrature(const std::array<double, 2>& a,
                                       const std::array<double, 2>& b, int degree) {
  if (degree < 1 || degree > 10)
    throw ValidationError("face_quadrature: unsupported degree " + std::to_string(degree));
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  const auto& rule = gauss_legendre_unit(gauss_point_count(degree));
  std::vector<QuadPoint> out;
  out.reserve(rule.size());
  for (const auto& [s, w] : rule)
    out.push_back({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), w * len});
  return out;
}

std::vector<QuadPoint> triangle_quadrature(const std::array<double, 2>& p0,
                                           const std::array<double, 2>& p1,
                                           const std::array<double, 2>& p2, int degree) {
  if (degree < 1 || degree > 10)
    throw ValidationError("triangle_quadrature: unsupported degree " + std::to_string(degree));
  const double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const double area = 0.5 * std::abs(area2);

  // reference-triangle points (l1, l2) with barycentrics (1-l1-l2, l1, l2)
  std::vector<std::array<double, 3>> ref; // (l1, l2, weight on unit triangle)
  if (degree == 1) {
    ref.push_back({1.0 / 3.0, 1.0 / 3.0, 0.5});
  } else if (degree == 2) {
    ref.push_back({1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0});
    ref.push_back({2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0});
    ref.push_back({1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0});
  } else {
    // Conical product: x = s, y = t(1-s); the Jacobian (1-s) raises the
    // required degree in s by one.
    const auto& rs = gauss_legendre_unit(gauss_point_count(degree + 1));
    const auto& rt = gauss_legendre_unit(gauss_point_count(degree));
    for (const auto& [s, ws] : rs)
      for (const auto& [t, wt] : rt)
        ref.push_back({s, t * (1.0 - s), ws * wt * (1.0 - s)});
  }

  std::vector<QuadPoint> out;
  out.reserve(ref.size());
  for (const auto& [l1, l2, w] : ref) {
    const double l0 = 1.0 - l1 - l2;
    out.push_back({l0 * p0[0] + l1 * p1[0] + l2 * p2[0],
                   l0 * p0[1] + l1 * p1[1] + l2 * p2[1], w * 2.0 * area});
  }
  return out;
}

} // namespace cauchycr
