#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "adaptudf/model.hpp"
#include "adaptudf/spatial.hpp"

namespace adaptudf {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Spectrum of a symmetric 3x3 matrix, ascending. eigenvectors[k] belongs to
/// eigenvalues[k]; the three vectors are orthonormal.
struct SymmetricEigen3 {
  std::array<double, 3> eigenvalues{};
  std::array<Point3, 3> eigenvectors{};
};

/// Population covariance (1/m) sum (p - mean)(p - mean)^T.
Mat3 covariance3(std::span<const Point3> points);

/// Cyclic Jacobi eigendecomposition. Throws NotSymmetric when an off-diagonal
/// pair differs by more than 1e-12 (relative to the largest entry, if above 1).
SymmetricEigen3 eigen_sym3(const Mat3& m);

/// Surface variation lambda0 / (lambda0 + lambda1 + lambda2) of the local
/// covariance, in [0, 1/3]. Fewer than three points, or a spectrum summing to
/// less than 1e-15, count as flat (0).
double surface_variation(std::span<const Point3> points);

/// Linear-interpolation percentile, p in [0, 100]. Throws EmptyInput.
double percentile(std::span<const double> values, double p);

struct CurvaturePercentiles {
  double p10 = 0.0;
  double p40 = 0.0;
  double p60 = 0.0;
  double p90 = 0.0;
};

/// Per-query surface variation plus its global percentile summary. sigma[i]
/// belongs to the i-th query and is empty when fewer than three points fell
/// inside that query's region.
struct CurvatureField {
  std::vector<std::optional<double>> sigma;
  CurvaturePercentiles percentiles;

  std::size_t sample_count() const noexcept;
};

/// Surface variation of the cloud inside radius r0 around each query.
/// Throws NoCurvatureSamples when no region holds at least three points.
CurvatureField curvature_field(const PointCloud& cloud, const SpatialIndex& index,
                               std::span<const Point3> queries, double r0, unsigned workers = 1);

}  // namespace adaptudf
