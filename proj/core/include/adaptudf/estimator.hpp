#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "adaptudf/patch.hpp"
#include "adaptudf/spatial.hpp"

namespace adaptudf {

/// Distance from q to the closest patch sample. Throws EmptyPatch.
double estimate_nearest_point(Point3 q, const Patch& patch);

/// Distance from q to the least-squares plane of the patch, never more than
/// estimate_nearest_point. Collinear or coincident patches (and patches with
/// fewer than three samples) fall back to the nearest-point value.
double estimate_plane_fit(Point3 q, const Patch& patch);

/// Global nearest-sample distance capped at far_cap; used where a query's
/// patch came back empty.
double estimate_far(Point3 q, const SpatialIndex& global_index, double far_cap);

/// Per-patch unsigned distance estimator. Implementations are stateless after
/// construction and are called concurrently from many workers.
class UdfEstimator {
 public:
  explicit UdfEstimator(double far_cap);
  virtual ~UdfEstimator() = default;

  virtual std::string_view name() const noexcept = 0;
  /// Non-negative, finite, deterministic. patch is non-empty.
  virtual double estimate(Point3 q, const Patch& patch) const = 0;

  double far_cap() const noexcept { return far_cap_; }

 private:
  double far_cap_;
};

class NearestPointEstimator final : public UdfEstimator {
 public:
  using UdfEstimator::UdfEstimator;
  std::string_view name() const noexcept override { return "nearest"; }
  double estimate(Point3 q, const Patch& patch) const override { return estimate_nearest_point(q, patch); }
};

class PlaneFitEstimator final : public UdfEstimator {
 public:
  using UdfEstimator::UdfEstimator;
  std::string_view name() const noexcept override { return "plane"; }
  double estimate(Point3 q, const Patch& patch) const override { return estimate_plane_fit(q, patch); }
};

/// "nearest" or "plane"; throws InvalidConfig otherwise.
std::unique_ptr<UdfEstimator> make_estimator(std::string_view name, double far_cap);

}  // namespace adaptudf
