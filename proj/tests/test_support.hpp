// Random generators and brute-force oracles shared by the test binaries. The
// oracles deliberately avoid the library's code paths (no k-d tree, no
// Jacobi sweeps, no std::sort-based percentile).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "adaptudf/curvature.hpp"
#include "adaptudf/model.hpp"

namespace adaptudf::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  Point3 point(double lo = -0.5, double hi = 0.5) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
  Point3 unit_vector() {
    while (true) {
      const Point3 g{normal(), normal(), normal()};
      const double n = norm(g);
      if (n > 1e-9) return g / n;
    }
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline PointCloud random_cloud(Rng& rng, std::size_t n, bool normals = false) {
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points.push_back(rng.point());
    if (normals) cloud.normals.push_back(rng.unit_vector());
  }
  return cloud;
}

/// Random rotation matrix applied as a function (via a random unit quaternion).
struct Rotation {
  double w, x, y, z;
  static Rotation random(Rng& rng) {
    Rotation q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    q.w /= n;
    q.x /= n;
    q.y /= n;
    q.z /= n;
    return q;
  }
  Point3 operator()(Point3 p) const {
    const Point3 u{x, y, z};
    const Point3 t = cross(u, p) * 2.0;
    return p + t * w + cross(u, t);
  }
};

inline std::vector<std::uint32_t> brute_radius(std::span<const Point3> pts, Point3 c, double r) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (squared_distance(pts[i], c) <= r * r) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

inline double brute_nearest(std::span<const Point3> pts, Point3 q) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point3& p : pts) best = std::min(best, distance(p, q));
  return best;
}

inline std::size_t brute_nearest_index(std::span<const Point3> pts, Point3 q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (distance(pts[i], q) < distance(pts[best], q)) best = i;
  }
  return best;
}

/// Eigenvalues of a symmetric 3x3 matrix as the roots of its characteristic
/// polynomial (trigonometric form, extended precision), ascending.
inline std::array<double, 3> characteristic_roots(const Mat3& m) {
  using ld = long double;
  const ld a00 = m[0][0], a11 = m[1][1], a22 = m[2][2];
  const ld a01 = m[0][1], a02 = m[0][2], a12 = m[1][2];
  const ld p1 = a01 * a01 + a02 * a02 + a12 * a12;
  const ld q = (a00 + a11 + a22) / 3;
  const ld p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + 2 * p1;
  if (p2 == 0) return {static_cast<double>(q), static_cast<double>(q), static_cast<double>(q)};
  const ld p = std::sqrt(p2 / 6);
  const ld b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
  const ld b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
  const ld det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02);
  const ld r = std::clamp(det / 2, static_cast<ld>(-1), static_cast<ld>(1));
  const ld phi = std::acos(r) / 3;
  const ld pi = 3.141592653589793238462643383279502884L;
  const ld e2 = q + 2 * p * std::cos(phi);
  const ld e0 = q + 2 * p * std::cos(phi + 2 * pi / 3);
  const ld e1 = 3 * q - e0 - e2;
  std::array<double, 3> out{static_cast<double>(e0), static_cast<double>(e1), static_cast<double>(e2)};
  std::sort(out.begin(), out.end());
  return out;
}

/// Covariance by the textbook one-pass-per-entry formula E[xy] - E[x]E[y],
/// evaluated in extended precision.
inline Mat3 covariance_oracle(std::span<const Point3> pts) {
  using ld = long double;
  ld mean[3] = {0, 0, 0};
  for (const Point3& p : pts) {
    for (int a = 0; a < 3; ++a) mean[a] += p[a];
  }
  for (auto& v : mean) v /= static_cast<ld>(pts.size());
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ld s = 0;
      for (const Point3& p : pts) s += (p[i] - mean[i]) * (p[j] - mean[j]);
      c[i][j] = static_cast<double>(s / static_cast<ld>(pts.size()));
    }
  }
  return c;
}

/// Surface variation from the oracle covariance and oracle eigenvalues.
inline double surface_variation_oracle(std::span<const Point3> pts) {
  const auto l = characteristic_roots(covariance_oracle(pts));
  const double l0 = std::max(l[0], 0.0), l1 = std::max(l[1], 0.0), l2 = std::max(l[2], 0.0);
  const double s = l0 + l1 + l2;
  return s < 1e-15 ? 0.0 : l0 / s;
}

/// Linear-interpolation percentile via selection rather than a full sort.
inline double percentile_oracle(std::vector<double> v, double p) {
  const double h = static_cast<double>(v.size() - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (lo + 1 >= v.size()) return a;
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

struct MetricOracle {
  double cd;
  double f1_0005;
  double f1_001;
  double nc;
};

/// O(nm) Chamfer / F1 / NC with the same conventions as the library.
inline MetricOracle metric_oracle(const PointCloud& a, const PointCloud& b) {
  auto directional = [](const PointCloud& from, const PointCloud& to, double& mean, double& within5,
                        double& within10, double& cos) {
    mean = within5 = within10 = cos = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const std::size_t j = brute_nearest_index(to.points, from.points[i]);
      const double d = distance(from.points[i], to.points[j]);
      mean += d;
      within5 += d <= 0.005 ? 1.0 : 0.0;
      within10 += d <= 0.01 ? 1.0 : 0.0;
      if (from.has_normals() && to.has_normals()) cos += std::abs(dot(from.normals[i], to.normals[j]));
    }
    const auto n = static_cast<double>(from.size());
    mean /= n;
    within5 /= n;
    within10 /= n;
    cos /= n;
  };
  double ma, pa5, pa10, ca, mb, pb5, pb10, cb;
  directional(a, b, ma, pa5, pa10, ca);
  directional(b, a, mb, pb5, pb10, cb);
  auto f1 = [](double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; };
  return {1000.0 * (ma + mb), f1(pa5, pb5), f1(pa10, pb10), 0.5 * (ca + cb)};
}

inline double relative_error(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace adaptudf::testing
