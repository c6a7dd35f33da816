#pragma once

#include <cstdint>
#include <string>

#include "adaptudf/model.hpp"

namespace adaptudf {

/// Point-set evaluation of a reconstruction against ground truth.
///
/// cd is the symmetric sum of mean nearest-neighbor L2 distances, multiplied
/// by 1000. f1_0005 and f1_001 are F-scores at distance thresholds 0.005 and
/// 0.01 (closed: a point counts when its distance is <= the threshold). nc is
/// the symmetric mean of |cos| between each point's normal and its nearest
/// neighbor's normal in the other set.
struct MetricReport {
  double cd = 0.0;
  double f1_0005 = 0.0;
  double f1_001 = 0.0;
  double nc = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  /// key=value lines: cd_x1000, f1_0005, f1_001, nc, samples, seed, cd_convention.
  std::string to_key_values() const;
  /// The same keys on one space-separated line.
  std::string to_record() const;
};

inline constexpr std::size_t kDefaultSampleCount = 100'000;

/// n area-weighted samples, uniform within each triangle, each carrying its
/// triangle's unit normal. Throws NoArea when the mesh has no positive-area face.
PointCloud sample_mesh(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

/// Throws EmptyInput when either set is empty.
double chamfer(const PointCloud& a, const PointCloud& b, unsigned workers = 1);

/// Precision is measured on `a` (reconstruction), recall on `b` (ground truth).
double f1_score(const PointCloud& a, const PointCloud& b, double tau, unsigned workers = 1);

/// Throws MissingNormals unless both sets carry normals.
double normal_consistency(const PointCloud& a, const PointCloud& b, unsigned workers = 1);

/// All four metrics from one pair of nearest-neighbor sweeps. `recon` and
/// `truth` must both carry normals.
MetricReport evaluate(const PointCloud& recon, const PointCloud& truth, std::size_t sample_count,
                      std::uint64_t seed, unsigned workers = 1);

/// Samples the mesh with sample_mesh(mesh, sample_count, seed) and evaluates it.
MetricReport evaluate_mesh(const TriangleMesh& mesh, const PointCloud& truth, std::size_t sample_count,
                           std::uint64_t seed, unsigned workers = 1);

}  // namespace adaptudf
