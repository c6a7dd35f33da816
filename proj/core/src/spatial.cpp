#include "adaptudf/spatial.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "adaptudf/error.hpp"

namespace adaptudf {
namespace {

double box_min_sq(Point3 q, Point3 lo, Point3 hi) noexcept {
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = q[a] < lo[a] ? lo[a] - q[a] : (q[a] > hi[a] ? q[a] - hi[a] : 0.0);
    d2 += d * d;
  }
  return d2;
}

double box_max_sq(Point3 q, Point3 lo, Point3 hi) noexcept {
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = std::max(std::abs(q[a] - lo[a]), std::abs(q[a] - hi[a]));
    d2 += d * d;
  }
  return d2;
}

}  // namespace

SpatialIndex::SpatialIndex(std::span<const Point3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), order_(points.size()) {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "cannot index an empty point set");
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidInput, "point set too large for 32-bit indices");
  }
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * (points_.size() / std::max<std::size_t>(leaf_size, 1)) + 1);
  build(0, static_cast<std::uint32_t>(points_.size()), std::max<std::size_t>(leaf_size, 1));
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = node.hi = points_[order_[begin]];
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    const Point3 p = points_[order_[i]];
    for (int a = 0; a < 3; ++a) {
      node.lo[a] = std::min(node.lo[a], p[a]);
      node.hi[a] = std::max(node.hi[a], p[a]);
    }
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size) return id;

  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
  }
  if (!(node.hi[axis] > node.lo[axis])) return id;  // all coincident: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][axis];
                     const double pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const std::int32_t left = build(begin, mid, leaf_size);
  const std::int32_t right = build(mid, end, leaf_size);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::uint32_t> SpatialIndex::radius_query(Point3 center, double radius) const {
  std::vector<std::uint32_t> out;
  radius_query(center, radius, out);
  return out;
}

void SpatialIndex::radius_query(Point3 center, double radius, std::vector<std::uint32_t>& out) const {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  out.clear();
  const double r2 = radius * radius;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_min_sq(center, node.lo, node.hi) > r2) continue;
    if (node.left < 0 || box_max_sq(center, node.lo, node.hi) <= r2) {
      const bool all_inside = box_max_sq(center, node.lo, node.hi) <= r2;
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        if (all_inside || squared_distance(points_[idx], center) <= r2) out.push_back(idx);
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  std::sort(out.begin(), out.end());
}

Neighbor SpatialIndex::nearest(Point3 q) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best = 0;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_min_sq(q, node.lo, node.hi) > best_d2) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        const double d2 = squared_distance(points_[idx], q);
        if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
          best_d2 = d2;
          best = idx;
        }
      }
      continue;
    }
    // Push the farther child first so the nearer one is explored first.
    const double dl = box_min_sq(q, nodes_[node.left].lo, nodes_[node.left].hi);
    const double dr = box_min_sq(q, nodes_[node.right].lo, nodes_[node.right].hi);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return {best, std::sqrt(best_d2)};
}

SpatialIndex build_index(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot index an empty cloud");
  return SpatialIndex(cloud.points);
}

}  // namespace adaptudf
