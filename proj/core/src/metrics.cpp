#include "adaptudf/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <vector>

#include "adaptudf/error.hpp"
#include "adaptudf/parallel.hpp"
#include "adaptudf/spatial.hpp"

namespace adaptudf {
namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Nearest neighbor in `to` for every point of `from`, by index.
std::vector<Neighbor> nearest_all(const PointCloud& from, const SpatialIndex& to, unsigned workers) {
  std::vector<Neighbor> out(from.size());
  parallel_for(from.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = to.nearest(from.points[i]);
  });
  return out;
}

double mean_distance(const std::vector<Neighbor>& nn) {
  double sum = 0.0;
  for (const Neighbor& n : nn) sum += n.distance;
  return sum / static_cast<double>(nn.size());
}

double fraction_within(const std::vector<Neighbor>& nn, double tau) {
  const auto hits = std::count_if(nn.begin(), nn.end(), [tau](const Neighbor& n) { return n.distance <= tau; });
  return static_cast<double>(hits) / static_cast<double>(nn.size());
}

double f1_from(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

double mean_abs_cos(const PointCloud& from, const PointCloud& to, const std::vector<Neighbor>& nn) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nn.size(); ++i) sum += std::abs(dot(from.normals[i], to.normals[nn[i].index]));
  return sum / static_cast<double>(nn.size());
}

void require_nonempty(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyInput, "metric needs two non-empty point sets");
}

void require_normals(const PointCloud& a, const PointCloud& b) {
  if (!a.has_normals() || !b.has_normals()) {
    throw Error(ErrorCode::MissingNormals, "normal consistency needs normals on both sets");
  }
}

}  // namespace

std::string MetricReport::to_key_values() const {
  return "cd_x1000=" + number(cd) + "\nf1_0005=" + number(f1_0005) + "\nf1_001=" + number(f1_001) +
         "\nnc=" + number(nc) + "\nsamples=" + std::to_string(sample_count) + "\nseed=" + std::to_string(seed) +
         "\ncd_convention=mean_l2_symmetric_sum_x1000\n";
}

std::string MetricReport::to_record() const {
  std::string s = to_key_values();
  std::replace(s.begin(), s.end(), '\n', ' ');
  if (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

PointCloud sample_mesh(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  mesh.validate();
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += 0.5 * norm(face_area_vector(mesh, f));
    cumulative[f] = total;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::NoArea, "mesh has no face with positive area");

  std::mt19937_64 rng(seed);
  PointCloud out;
  out.points.reserve(n);
  out.normals.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = unit_uniform(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto f = static_cast<std::size_t>(it - cumulative.begin());
    const double r1 = std::sqrt(unit_uniform(rng));
    const double r2 = unit_uniform(rng);
    const Face& face = mesh.faces[f];
    const Point3 a = mesh.vertices[face[0]];
    const Point3 b = mesh.vertices[face[1]];
    const Point3 c = mesh.vertices[face[2]];
    out.points.push_back(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2));
    const Point3 normal = face_area_vector(mesh, f);
    out.normals.push_back(normal / norm(normal));
  }
  return out;
}

double chamfer(const PointCloud& a, const PointCloud& b, unsigned workers) {
  require_nonempty(a, b);
  const SpatialIndex ia(a.points);
  const SpatialIndex ib(b.points);
  return 1000.0 * (mean_distance(nearest_all(a, ib, workers)) + mean_distance(nearest_all(b, ia, workers)));
}

double f1_score(const PointCloud& a, const PointCloud& b, double tau, unsigned workers) {
  require_nonempty(a, b);
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "F1 threshold must be positive");
  const SpatialIndex ia(a.points);
  const SpatialIndex ib(b.points);
  return f1_from(fraction_within(nearest_all(a, ib, workers), tau), fraction_within(nearest_all(b, ia, workers), tau));
}

double normal_consistency(const PointCloud& a, const PointCloud& b, unsigned workers) {
  require_nonempty(a, b);
  require_normals(a, b);
  const SpatialIndex ia(a.points);
  const SpatialIndex ib(b.points);
  return 0.5 * (mean_abs_cos(a, b, nearest_all(a, ib, workers)) + mean_abs_cos(b, a, nearest_all(b, ia, workers)));
}

MetricReport evaluate(const PointCloud& recon, const PointCloud& truth, std::size_t sample_count,
                      std::uint64_t seed, unsigned workers) {
  require_nonempty(recon, truth);
  require_normals(recon, truth);
  const SpatialIndex ir(recon.points);
  const SpatialIndex it(truth.points);
  const auto r2t = nearest_all(recon, it, workers);
  const auto t2r = nearest_all(truth, ir, workers);
  MetricReport report;
  report.cd = 1000.0 * (mean_distance(r2t) + mean_distance(t2r));
  report.f1_0005 = f1_from(fraction_within(r2t, 0.005), fraction_within(t2r, 0.005));
  report.f1_001 = f1_from(fraction_within(r2t, 0.01), fraction_within(t2r, 0.01));
  report.nc = 0.5 * (mean_abs_cos(recon, truth, r2t) + mean_abs_cos(truth, recon, t2r));
  report.sample_count = sample_count;
  report.seed = seed;
  return report;
}

MetricReport evaluate_mesh(const TriangleMesh& mesh, const PointCloud& truth, std::size_t sample_count,
                           std::uint64_t seed, unsigned workers) {
  return evaluate(sample_mesh(mesh, sample_count, seed), truth, sample_count, seed, workers);
}

}  // namespace adaptudf
