#include <cmath>
#include <random>
#include <string>

#include "adaptudf/error.hpp"
#include "adaptudf/pipeline.hpp"

namespace adaptudf {
namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
  // Box-Muller on (0, 1] to stay clear of log(0).
  const double u1 = 1.0 - unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void push(PointCloud& cloud, Point3 p, Point3 n, double offset) {
  cloud.points.push_back(p + n * offset);
  cloud.normals.push_back(n);
}

PointCloud sphere(const FixtureSpec& spec, std::mt19937_64& rng) {
  PointCloud cloud;
  while (cloud.size() < spec.count) {
    const Point3 g{standard_normal(rng), standard_normal(rng), standard_normal(rng)};
    const double len = norm(g);
    if (len < 1e-12) continue;
    const Point3 n = g / len;
    push(cloud, n * spec.radius, n, spec.noise > 0 ? spec.noise * standard_normal(rng) : 0.0);
  }
  return cloud;
}

PointCloud cube(const FixtureSpec& spec, std::mt19937_64& rng) {
  PointCloud cloud;
  const double h = spec.radius;
  for (std::size_t s = 0; s < spec.count; ++s) {
    const auto face = static_cast<int>(unit_uniform(rng) * 6.0) % 6;
    const int axis = face / 2;
    const double sign = face % 2 == 0 ? -1.0 : 1.0;
    Point3 p;
    Point3 n;
    p[axis] = sign * h;
    n[axis] = sign;
    p[(axis + 1) % 3] = (2.0 * unit_uniform(rng) - 1.0) * h;
    p[(axis + 2) % 3] = (2.0 * unit_uniform(rng) - 1.0) * h;
    push(cloud, p, n, spec.noise > 0 ? spec.noise * standard_normal(rng) : 0.0);
  }
  return cloud;
}

PointCloud sheets(const FixtureSpec& spec, std::mt19937_64& rng) {
  PointCloud cloud;
  const std::size_t per_sheet = spec.count / 2;
  for (int sheet = 0; sheet < 2; ++sheet) {
    const double z = sheet == 0 ? -0.5 * spec.gap : 0.5 * spec.gap;
    const Point3 n{0.0, 0.0, 1.0};
    for (std::size_t s = 0; s < per_sheet; ++s) {
      Point3 p;
      if (s < 4) {
        p = {s & 1 ? 0.5 : -0.5, s & 2 ? 0.5 : -0.5, z};  // pin the extent to exactly one unit
      } else {
        p = {unit_uniform(rng) - 0.5, unit_uniform(rng) - 0.5, z};
      }
      push(cloud, p, n, spec.noise > 0 ? spec.noise * standard_normal(rng) : 0.0);
    }
  }
  return cloud;
}

}  // namespace

FixtureKind parse_fixture_kind(std::string_view name) {
  if (name == "sphere") return FixtureKind::Sphere;
  if (name == "cube") return FixtureKind::Cube;
  if (name == "sheets") return FixtureKind::Sheets;
  throw Error(ErrorCode::InvalidConfig, "unknown fixture '" + std::string(name) + "'");
}

PointCloud make_fixture(const FixtureSpec& spec) {
  if (spec.count < 8) throw Error(ErrorCode::InvalidConfig, "fixture needs at least 8 points");
  if (!(spec.radius > 0.0) || !(spec.gap > 0.0) || spec.noise < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "fixture radius and gap must be positive, noise non-negative");
  }
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case FixtureKind::Sphere: return sphere(spec, rng);
    case FixtureKind::Cube: return cube(spec, rng);
    case FixtureKind::Sheets: return sheets(spec, rng);
  }
  return {};
}

}  // namespace adaptudf
