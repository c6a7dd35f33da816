#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptudf/model.hpp"
#include "adaptudf/spatial.hpp"

namespace adaptudf {

/// Fixed-size local neighborhood handed to a UDF estimator.
struct Patch {
  Point3 query{};
  double radius_used = 0.0;
  std::vector<Point3> points;  // empty, or exactly the policy's target_count
  std::size_t source_count = 0;
  double sigma = 0.0;

  bool empty() const noexcept { return points.empty(); }
};

/// How under- and over-full neighborhoods are brought to target_count.
/// Below curvature_threshold, missing samples are copies of the centroid;
/// at or above it, existing samples are duplicated round-robin.
struct ResamplePolicy {
  std::size_t target_count = 64;
  double curvature_threshold = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Cloud points within distance r of q (closed ball), ascending source index.
std::vector<Point3> extract_patch(const SpatialIndex& index, const PointCloud& cloud, Point3 q, double r);

/// Bring `points` to exactly policy.target_count samples (empty stays empty).
/// `stream` selects an independent random stream, e.g. the query id, so that
/// results do not depend on evaluation order.
std::vector<Point3> resample(std::span<const Point3> points, double sigma, const ResamplePolicy& policy,
                             std::uint64_t stream = 0);

/// extract_patch followed by resample.
Patch make_patch(const SpatialIndex& index, const PointCloud& cloud, Point3 q, double r, double sigma,
                 const ResamplePolicy& policy, std::uint64_t stream);

}  // namespace adaptudf
