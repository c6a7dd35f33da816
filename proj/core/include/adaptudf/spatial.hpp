#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptudf/model.hpp"

namespace adaptudf {

struct Neighbor {
  std::uint32_t index = 0;
  double distance = 0.0;
};

/// Immutable k-d tree over a point set. Queries are exact (they agree with a
/// brute-force scan) and safe to issue concurrently.
///
/// Construction splits each node at the median of its widest bounding-box axis
/// until at most `leaf_size` points remain. Every node keeps its tight bounding
/// box, which drives both pruning and whole-subtree acceptance in radius queries.
class SpatialIndex {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  explicit SpatialIndex(std::span<const Point3> points, std::size_t leaf_size = kDefaultLeafSize);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point3>& points() const noexcept { return points_; }

  /// Indices of points p with |p - center| <= radius, ascending. radius must be > 0.
  std::vector<std::uint32_t> radius_query(Point3 center, double radius) const;
  /// Same as above, reusing `out` (cleared first).
  void radius_query(Point3 center, double radius, std::vector<std::uint32_t>& out) const;

  /// Closest point; among equidistant points the lowest index wins.
  Neighbor nearest(Point3 q) const;
  double nearest_distance(Point3 q) const { return nearest(q).distance; }

 private:
  struct Node {
    Point3 lo;
    Point3 hi;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);

  std::vector<Point3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

/// Throws EmptyCloud for an empty cloud.
SpatialIndex build_index(const PointCloud& cloud);

}  // namespace adaptudf
