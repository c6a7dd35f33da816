#include "adaptudf/patch.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "adaptudf/error.hpp"

namespace adaptudf {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, n) by rejection; independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::vector<Point3> extract_patch(const SpatialIndex& index, const PointCloud& cloud, Point3 q, double r) {
  std::vector<Point3> out;
  for (std::uint32_t id : index.radius_query(q, r)) out.push_back(cloud.points[id]);
  return out;
}

std::vector<Point3> resample(std::span<const Point3> points, double sigma, const ResamplePolicy& policy,
                             std::uint64_t stream) {
  if (policy.target_count == 0) throw Error(ErrorCode::InvalidConfig, "target_count must be positive");
  const std::size_t count = points.size();
  const std::size_t target = policy.target_count;
  if (count == 0) return {};
  if (count == target) return {points.begin(), points.end()};

  if (count > target) {
    std::mt19937_64 rng(splitmix64(policy.rng_seed ^ stream));
    std::vector<std::uint32_t> pick(count);
    std::iota(pick.begin(), pick.end(), 0u);
    for (std::size_t i = 0; i < target; ++i) {
      const std::size_t j = i + uniform_below(rng, count - i);
      std::swap(pick[i], pick[j]);
    }
    pick.resize(target);
    std::sort(pick.begin(), pick.end());
    std::vector<Point3> out;
    out.reserve(target);
    for (std::uint32_t i : pick) out.push_back(points[i]);
    return out;
  }

  std::vector<Point3> out(points.begin(), points.end());
  out.reserve(target);
  if (sigma < policy.curvature_threshold) {
    const Point3 c = centroid(points);
    out.resize(target, c);
  } else {
    for (std::size_t i = 0; out.size() < target; i = (i + 1) % count) out.push_back(points[i]);
  }
  return out;
}

Patch make_patch(const SpatialIndex& index, const PointCloud& cloud, Point3 q, double r, double sigma,
                 const ResamplePolicy& policy, std::uint64_t stream) {
  Patch patch;
  patch.query = q;
  patch.radius_used = r;
  patch.sigma = sigma;
  const std::vector<Point3> raw = extract_patch(index, cloud, q, r);
  patch.source_count = raw.size();
  patch.points = resample(raw, sigma, policy, stream);
  return patch;
}

}  // namespace adaptudf
