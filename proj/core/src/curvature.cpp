#include "adaptudf/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "adaptudf/error.hpp"
#include "adaptudf/parallel.hpp"

namespace adaptudf {

Mat3 covariance3(std::span<const Point3> points) {
  Mat3 c{};
  if (points.empty()) return c;
  const Point3 mean = centroid(points);
  for (const Point3& p : points) {
    const Point3 d = p - mean;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) c[i][j] += d[i] * d[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(points.size());
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      c[i][j] *= inv;
      c[j][i] = c[i][j];
    }
  }
  return c;
}

SymmetricEigen3 eigen_sym3(const Mat3& m) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (!(std::abs(m[i][j] - m[j][i]) <= tol)) {
        throw Error(ErrorCode::NotSymmetric, "matrix entries (" + std::to_string(i) + "," + std::to_string(j) +
                                                 ") and (" + std::to_string(j) + "," + std::to_string(i) +
                                                 ") differ");
      }
    }
  }

  // Work on the symmetrized copy; v accumulates the rotations column-wise.
  Mat3 a{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = 0.5 * (m[i][j] + m[j][i]);
  }
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off == 0.0) break;
    const double diag = std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]);
    if (off <= 1e-300 || off <= diag * 1e-18) break;

    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
  SymmetricEigen3 out;
  for (int k = 0; k < 3; ++k) {
    const int col = order[k];
    out.eigenvalues[k] = a[col][col];
    out.eigenvectors[k] = {v[0][col], v[1][col], v[2][col]};
  }
  return out;
}

double surface_variation(std::span<const Point3> points) {
  if (points.size() < 3) return 0.0;
  const SymmetricEigen3 eig = eigen_sym3(covariance3(points));
  const double l0 = std::max(eig.eigenvalues[0], 0.0);
  const double l1 = std::max(eig.eigenvalues[1], 0.0);
  const double l2 = std::max(eig.eigenvalues[2], 0.0);
  const double sum = l0 + l1 + l2;
  if (sum < 1e-15) return 0.0;
  return std::clamp(l0 / sum, 0.0, 1.0 / 3.0);
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "percentile of an empty list");
  if (!(p >= 0.0 && p <= 100.0)) throw Error(ErrorCode::InvalidInput, "percentile outside [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = static_cast<double>(sorted.size() - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::size_t CurvatureField::sample_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [](const auto& s) { return s.has_value(); }));
}

CurvatureField curvature_field(const PointCloud& cloud, const SpatialIndex& index,
                               std::span<const Point3> queries, double r0, unsigned workers) {
  if (!(r0 > 0.0)) throw Error(ErrorCode::InvalidInput, "curvature radius must be positive");
  CurvatureField field;
  field.sigma.resize(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> ids;
    std::vector<Point3> region;
    for (std::size_t q = begin; q < end; ++q) {
      index.radius_query(queries[q], r0, ids);
      if (ids.size() < 3) continue;
      region.clear();
      for (std::uint32_t id : ids) region.push_back(cloud.points[id]);
      field.sigma[q] = surface_variation(region);
    }
  });

  std::vector<double> present;
  present.reserve(queries.size());
  for (const auto& s : field.sigma) {
    if (s) present.push_back(*s);
  }
  if (present.empty()) {
    throw Error(ErrorCode::NoCurvatureSamples, "no query region holds at least 3 points");
  }
  field.percentiles = {percentile(present, 10), percentile(present, 40), percentile(present, 60),
                       percentile(present, 90)};
  return field;
}

}  // namespace adaptudf
