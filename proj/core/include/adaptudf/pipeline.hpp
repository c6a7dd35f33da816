#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adaptudf/curvature.hpp"
#include "adaptudf/grid.hpp"
#include "adaptudf/metrics.hpp"
#include "adaptudf/model.hpp"

namespace adaptudf {

/// A curvature threshold given either as one of the four percentile
/// breakpoints or as an absolute surface-variation value.
struct ThresholdSelector {
  enum class Kind { P10, P40, P60, P90, Absolute };
  Kind kind = Kind::P60;
  double value = 0.0;

  /// "p10", "p40", "p60", "p90" or a number. Throws InvalidConfig.
  static ThresholdSelector parse(std::string_view text);
  double resolve(const CurvaturePercentiles& p) const noexcept;
  std::string to_string() const;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path ground_truth;  // bench / metrics; empty = use the input cloud
  std::filesystem::path field_dump;    // optional dense-field dump

  int coarse_cells = 128;
  int margin_cells = 3;

  double r0 = 0.018;
  double s_max = 1.35;
  double s_min = 2.0 / 3.0;
  double alpha = 0.5;
  double beta = 1.5;

  ThresholdSelector refine_threshold{};
  /// Refinement never triggers below this surface variation, so clouds whose
  /// percentiles collapse to 0 (exact planes) are not refined wholesale.
  double refine_floor = 1e-9;
  /// Refined queries reuse the curvature of the coarse query that added them;
  /// when false they measure their own.
  bool inherit_sigma = true;

  std::size_t target_count = 64;
  ThresholdSelector resample_threshold{};
  std::uint64_t seed = 0;

  std::string estimator = "plane";
  double far_cap = 0.10;
  double epsilon = 0.0;  // 0 = half a fine cell

  std::size_t sample_count = kDefaultSampleCount;
  bool baseline_mode = false;
  unsigned workers = 1;

  /// Throws InvalidConfig on any out-of-range field.
  void validate() const;
  LatticeSpec lattice() const noexcept { return {coarse_cells, margin_cells}; }
  /// Apply one key=value setting; keys are kebab- or snake-case field names.
  void set(std::string_view key, std::string_view value);
  /// Every setting as key=value lines, in a fixed order.
  std::string to_key_values() const;
};

/// Read `key = value` lines ('#' starts a comment) into cfg.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

/// Wall-clock split of a run. patch_time covers loading, curvature, radius
/// selection, query refinement, neighborhood extraction and resampling;
/// udf_time covers distance estimation plus the fill of unevaluated sites.
struct TimingReport {
  double patch_time = 0.0;
  double udf_time = 0.0;
  double extract_time = 0.0;
  std::size_t evaluated_queries = 0;
  std::size_t filled_queries = 0;
  std::size_t total_fine_vertices = 0;

  std::string to_key_values(std::string_view prefix = "") const;
};

struct ReconstructionResult {
  TriangleMesh mesh;             // input units
  TriangleMesh normalized_mesh;  // normalized units
  NormalizationTransform transform;
  TimingReport timing;
  std::optional<CurvaturePercentiles> percentiles;  // empty in baseline mode
  std::size_t hot_queries = 0;
  double fine_spacing = 0.0;  // normalized units
  double epsilon = 0.0;       // normalized units
};

/// Full pipeline on an in-memory cloud (no file I/O except the optional field dump).
ReconstructionResult run_pipeline(const PointCloud& cloud, const PipelineConfig& config);

/// Read config.input, run the pipeline, write config.output (if set).
ReconstructionResult reconstruct(const PipelineConfig& config);

/// Per-query curvature on the coarse lattice, as written by the `curvature` command.
struct CurvatureTable {
  LatticeSpec lattice;
  std::vector<CoarseQuery> queries;
  CurvatureField field;
  std::string to_text() const;
};
CurvatureTable curvature_table(const PointCloud& cloud, const PipelineConfig& config);

struct BenchReport {
  ReconstructionResult adaptive;
  ReconstructionResult baseline;
  MetricReport adaptive_metrics;
  MetricReport baseline_metrics;
  double query_ratio = 0.0;  // adaptive evaluated / baseline evaluated

  std::string to_key_values() const;
};

/// Adaptive and uniform-fine runs on the same cloud, both scored against
/// `truth` in the input cloud's normalized frame.
BenchReport bench(const PointCloud& cloud, const PointCloud& truth, const PipelineConfig& config);

/// Analytic test clouds with exact unit normals.
enum class FixtureKind { Sphere, Cube, Sheets };

struct FixtureSpec {
  FixtureKind kind = FixtureKind::Sphere;
  std::size_t count = 50'000;
  std::uint64_t seed = 0;
  double radius = 0.3;      // sphere radius / cube half-side
  double gap = 0.045;       // sheet separation
  double noise = 0.0;       // Gaussian jitter along the normal
};

FixtureKind parse_fixture_kind(std::string_view name);
/// Sheets: the first count/2 points lie on the lower sheet. Both sheets span
/// [-0.5, 0.5]^2 with their corners always included.
PointCloud make_fixture(const FixtureSpec& spec);

}  // namespace adaptudf
