#include "adaptudf/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaptudf/curvature.hpp"
#include "adaptudf/error.hpp"

namespace adaptudf {

double estimate_nearest_point(Point3 q, const Patch& patch) {
  if (patch.points.empty()) throw Error(ErrorCode::EmptyPatch, "nearest-point estimate needs samples");
  double best = std::numeric_limits<double>::infinity();
  for (const Point3& p : patch.points) best = std::min(best, squared_distance(p, q));
  return std::sqrt(best);
}

double estimate_plane_fit(Point3 q, const Patch& patch) {
  const double nearest = estimate_nearest_point(q, patch);
  if (patch.points.size() < 3) return nearest;

  const SymmetricEigen3 eig = eigen_sym3(covariance3(patch.points));
  const double l1 = std::max(eig.eigenvalues[1], 0.0);
  const double l2 = std::max(eig.eigenvalues[2], 0.0);
  // Collinear or coincident samples do not determine a plane.
  if (!(l2 > 0.0) || l1 <= 1e-12 * l2) return nearest;

  const Point3 c = centroid(patch.points);
  const double plane = std::abs(dot(q - c, eig.eigenvectors[0]));
  return std::min(plane, nearest);
}

double estimate_far(Point3 q, const SpatialIndex& global_index, double far_cap) {
  if (!(far_cap > 0.0)) throw Error(ErrorCode::InvalidInput, "far_cap must be positive");
  return std::min(global_index.nearest_distance(q), far_cap);
}

UdfEstimator::UdfEstimator(double far_cap) : far_cap_(far_cap) {
  if (!(far_cap > 0.0)) throw Error(ErrorCode::InvalidConfig, "far_cap must be positive");
}

std::unique_ptr<UdfEstimator> make_estimator(std::string_view name, double far_cap) {
  if (name == "nearest") return std::make_unique<NearestPointEstimator>(far_cap);
  if (name == "plane") return std::make_unique<PlaneFitEstimator>(far_cap);
  throw Error(ErrorCode::InvalidConfig, "unknown estimator '" + std::string(name) + "'");
}

}  // namespace adaptudf
