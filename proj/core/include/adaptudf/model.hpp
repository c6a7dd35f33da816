#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace adaptudf {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int axis) noexcept { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double operator[](int axis) const noexcept {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }

  friend constexpr Point3 operator+(Point3 a, Point3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point3 operator-(Point3 a, Point3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Point3 operator*(Point3 a, double s) noexcept { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Point3 operator*(double s, Point3 a) noexcept { return a * s; }
  friend constexpr Point3 operator/(Point3 a, double s) noexcept { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(Point3 a, Point3 b) noexcept = default;
};

constexpr double dot(Point3 a, Point3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Point3 cross(Point3 a, Point3 b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double squared_norm(Point3 a) noexcept { return dot(a, a); }
inline double norm(Point3 a) noexcept { return std::sqrt(squared_norm(a)); }

constexpr double squared_distance(Point3 a, Point3 b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}
inline double distance(Point3 a, Point3 b) noexcept { return std::sqrt(squared_distance(a, b)); }

inline bool is_finite(Point3 p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// Arithmetic mean. Empty input yields the origin.
Point3 centroid(std::span<const Point3> points) noexcept;

/// Point samples with optional per-point unit normals. `normals` is either
/// empty or exactly as long as `points`.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<Point3> normals;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }
  bool has_normals() const noexcept { return !normals.empty(); }

  /// Throws InvalidInput on non-finite coordinates, a normal count mismatch,
  /// or a normal whose length differs from 1 by more than 1e-6.
  void validate() const;
};

/// Maps p to (p + translation) * scale.
struct NormalizationTransform {
  double scale = 1.0;
  Point3 translation{};

  Point3 apply(Point3 p) const noexcept { return (p + translation) * scale; }
  Point3 invert(Point3 p) const noexcept { return p / scale - translation; }
};

using Face = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<Face> faces;

  /// Throws InvalidInput if a face index is out of range or a face repeats
  /// one vertex three times.
  void validate() const;
};

/// Unnormalized face normal (cross product of two edges); its length is twice
/// the triangle area.
Point3 face_area_vector(const TriangleMesh& mesh, std::size_t face) noexcept;

/// Fit the cloud's bounding box into [-0.5, 0.5]^3: the longest side maps to
/// length 1 and the box center to the origin. Normals are copied unchanged.
std::pair<PointCloud, NormalizationTransform> normalize_cloud(const PointCloud& cloud);

TriangleMesh denormalize_mesh(const TriangleMesh& mesh, const NormalizationTransform& transform);

}  // namespace adaptudf
