#include "adaptudf/model.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "adaptudf/error.hpp"

namespace adaptudf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoCurvatureSamples: return "NoCurvatureSamples";
    case ErrorCode::EmptyPatch: return "EmptyPatch";
    case ErrorCode::DegeneratePatch: return "DegeneratePatch";
    case ErrorCode::NotCoarseVertex: return "NotCoarseVertex";
    case ErrorCode::MissingCoarseValue: return "MissingCoarseValue";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::NoArea: return "NoArea";
    case ErrorCode::MissingNormals: return "MissingNormals";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Point3 centroid(std::span<const Point3> points) noexcept {
  if (points.empty()) return {};
  Point3 sum{};
  for (const Point3& p : points) sum = sum + p;
  return sum / static_cast<double>(points.size());
}

void PointCloud::validate() const {
  if (!normals.empty() && normals.size() != points.size()) {
    throw Error(ErrorCode::InvalidInput, "normal count " + std::to_string(normals.size()) +
                                             " does not match point count " +
                                             std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_finite(points[i])) {
      throw Error(ErrorCode::InvalidInput, "non-finite coordinate at point " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (std::abs(norm(normals[i]) - 1.0) > 1e-6) {
      throw Error(ErrorCode::InvalidInput, "normal " + std::to_string(i) + " is not unit length");
    }
  }
}

void TriangleMesh::validate() const {
  const auto n = vertices.size();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    if (face[0] >= n || face[1] >= n || face[2] >= n) {
      throw Error(ErrorCode::InvalidInput, "face " + std::to_string(f) + " indexes past vertex count");
    }
    if (face[0] == face[1] && face[1] == face[2]) {
      throw Error(ErrorCode::InvalidInput, "face " + std::to_string(f) + " is degenerate");
    }
  }
}

Point3 face_area_vector(const TriangleMesh& mesh, std::size_t face) noexcept {
  const Face& f = mesh.faces[face];
  const Point3 a = mesh.vertices[f[0]];
  return cross(mesh.vertices[f[1]] - a, mesh.vertices[f[2]] - a);
}

std::pair<PointCloud, NormalizationTransform> normalize_cloud(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot normalize an empty cloud");

  constexpr double inf = std::numeric_limits<double>::infinity();
  Point3 lo{inf, inf, inf};
  Point3 hi{-inf, -inf, -inf};
  for (const Point3& p : cloud.points) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  const double longest = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  if (!(longest > 0.0)) {
    throw Error(ErrorCode::DegenerateExtent, "all points coincide");
  }

  NormalizationTransform transform;
  transform.scale = 1.0 / longest;
  transform.translation = (lo + hi) * -0.5;

  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Point3& p : cloud.points) out.points.push_back(transform.apply(p));
  out.normals = cloud.normals;
  return {std::move(out), transform};
}

TriangleMesh denormalize_mesh(const TriangleMesh& mesh, const NormalizationTransform& transform) {
  TriangleMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const Point3& v : mesh.vertices) out.vertices.push_back(transform.invert(v));
  out.faces = mesh.faces;
  return out;
}

}  // namespace adaptudf
