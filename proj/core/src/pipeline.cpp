#include "adaptudf/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "adaptudf/error.hpp"
#include "adaptudf/estimator.hpp"
#include "adaptudf/extract.hpp"
#include "adaptudf/io.hpp"
#include "adaptudf/parallel.hpp"
#include "adaptudf/patch.hpp"
#include "adaptudf/schedule.hpp"
#include "adaptudf/spatial.hpp"

namespace adaptudf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::InvalidConfig, "invalid value '" + std::string(value) + "' for " + std::string(key));
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) bad_value(key, value);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

// Stage-tagged rethrow so callers know where a module error surfaced.
template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "[" + std::string(name) + "] " + e.message());
  }
}

struct Query {
  std::size_t fine_id;
  double sigma;
  double radius;
};

constexpr std::size_t kBatchSize = 1 << 15;

}  // namespace

ThresholdSelector ThresholdSelector::parse(std::string_view text) {
  const std::string t = trim(text);
  if (t == "p10") return {Kind::P10, 0.0};
  if (t == "p40") return {Kind::P40, 0.0};
  if (t == "p60") return {Kind::P60, 0.0};
  if (t == "p90") return {Kind::P90, 0.0};
  const double v = parse_real("threshold", t);
  if (v < 0.0) bad_value("threshold", t);
  return {Kind::Absolute, v};
}

double ThresholdSelector::resolve(const CurvaturePercentiles& p) const noexcept {
  switch (kind) {
    case Kind::P10: return p.p10;
    case Kind::P40: return p.p40;
    case Kind::P60: return p.p60;
    case Kind::P90: return p.p90;
    case Kind::Absolute: return value;
  }
  return value;
}

std::string ThresholdSelector::to_string() const {
  switch (kind) {
    case Kind::P10: return "p10";
    case Kind::P40: return "p40";
    case Kind::P60: return "p60";
    case Kind::P90: return "p90";
    case Kind::Absolute: return number(value);
  }
  return number(value);
}

void PipelineConfig::validate() const {
  lattice().validate();
  RadiusSchedule schedule;
  schedule.s_max = s_max;
  schedule.s_min = s_min;
  schedule.alpha = alpha;
  schedule.beta = beta;
  schedule.r0 = r0;
  schedule.validate();
  if (target_count == 0) throw Error(ErrorCode::InvalidConfig, "target-count must be positive");
  if (!(far_cap > 0.0)) throw Error(ErrorCode::InvalidConfig, "far-cap must be positive");
  if (epsilon < 0.0) throw Error(ErrorCode::InvalidConfig, "epsilon must be non-negative");
  if (refine_floor < 0.0) throw Error(ErrorCode::InvalidConfig, "refine-floor must be non-negative");
  if (sample_count == 0) throw Error(ErrorCode::InvalidConfig, "sample-count must be positive");
  if (estimator != "plane" && estimator != "nearest") {
    throw Error(ErrorCode::InvalidConfig, "estimator must be 'plane' or 'nearest'");
  }
}

void PipelineConfig::set(std::string_view raw_key, std::string_view raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string value = trim(raw_value);
  if (key == "input") input = value;
  else if (key == "output") output = value;
  else if (key == "ground-truth") ground_truth = value;
  else if (key == "field-dump") field_dump = value;
  else if (key == "coarse-cells") coarse_cells = parse_int<int>(key, value);
  else if (key == "margin-cells") margin_cells = parse_int<int>(key, value);
  else if (key == "r0") r0 = parse_real(key, value);
  else if (key == "s-max") s_max = parse_real(key, value);
  else if (key == "s-min") s_min = parse_real(key, value);
  else if (key == "alpha") alpha = parse_real(key, value);
  else if (key == "beta") beta = parse_real(key, value);
  else if (key == "refine-threshold") refine_threshold = ThresholdSelector::parse(value);
  else if (key == "refine-floor") refine_floor = parse_real(key, value);
  else if (key == "inherit-sigma") inherit_sigma = parse_bool(key, value);
  else if (key == "target-count") target_count = parse_int<std::size_t>(key, value);
  else if (key == "resample-threshold") resample_threshold = ThresholdSelector::parse(value);
  else if (key == "seed") seed = parse_int<std::uint64_t>(key, value);
  else if (key == "estimator") estimator = value;
  else if (key == "far-cap") far_cap = parse_real(key, value);
  else if (key == "epsilon") epsilon = parse_real(key, value);
  else if (key == "sample-count") sample_count = parse_int<std::size_t>(key, value);
  else if (key == "baseline") baseline_mode = parse_bool(key, value);
  else if (key == "workers") workers = parse_int<unsigned>(key, value);
  else throw Error(ErrorCode::InvalidConfig, "unknown setting '" + key + "'");
}

std::string PipelineConfig::to_key_values() const {
  std::ostringstream out;
  out << "input=" << input.string() << '\n'
      << "output=" << output.string() << '\n'
      << "coarse-cells=" << coarse_cells << '\n'
      << "margin-cells=" << margin_cells << '\n'
      << "r0=" << number(r0) << '\n'
      << "s-max=" << number(s_max) << '\n'
      << "s-min=" << number(s_min) << '\n'
      << "alpha=" << number(alpha) << '\n'
      << "beta=" << number(beta) << '\n'
      << "refine-threshold=" << refine_threshold.to_string() << '\n'
      << "refine-floor=" << number(refine_floor) << '\n'
      << "inherit-sigma=" << (inherit_sigma ? "true" : "false") << '\n'
      << "target-count=" << target_count << '\n'
      << "resample-threshold=" << resample_threshold.to_string() << '\n'
      << "seed=" << seed << '\n'
      << "estimator=" << estimator << '\n'
      << "far-cap=" << number(far_cap) << '\n'
      << "epsilon=" << number(epsilon) << '\n'
      << "sample-count=" << sample_count << '\n'
      << "baseline=" << (baseline_mode ? "true" : "false") << '\n'
      << "workers=" << workers << '\n';
  return out.str();
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  path.string() + ": line " + std::to_string(line_no) + ": expected key=value");
    }
    cfg.set(std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
  }
}

std::string TimingReport::to_key_values(std::string_view prefix) const {
  const std::string p(prefix);
  return p + "patch_time=" + number(patch_time) + "\n" + p + "udf_time=" + number(udf_time) + "\n" + p +
         "extract_time=" + number(extract_time) + "\n" + p + "evaluated_queries=" + std::to_string(evaluated_queries) +
         "\n" + p + "filled_queries=" + std::to_string(filled_queries) + "\n" + p +
         "total_fine_vertices=" + std::to_string(total_fine_vertices) + "\n";
}

ReconstructionResult run_pipeline(const PointCloud& cloud, const PipelineConfig& config) {
  config.validate();
  ReconstructionResult result;
  TimingReport& timing = result.timing;
  const unsigned workers = resolve_workers(config.workers);
  const auto estimator = make_estimator(config.estimator, config.far_cap);

  auto clock = Clock::now();
  auto [normalized, transform] = stage("normalize", [&] { return normalize_cloud(cloud); });
  result.transform = transform;
  const SpatialIndex index = stage("index", [&] { return SpatialIndex(normalized.points); });

  const LatticeSpec spec = config.lattice();
  AdaptiveGrid grid(spec);
  std::vector<Query> queries;
  ResamplePolicy policy;
  policy.target_count = config.target_count;
  policy.rng_seed = config.seed;

  if (config.baseline_mode) {
    // Uniform fine lattice, fixed radius, one fill rule for every neighborhood.
    grid.refine_all();
    queries.reserve(spec.fine_count());
    for (std::size_t id = 0; id < spec.fine_count(); ++id) queries.push_back({id, 0.0, config.r0});
    policy.curvature_threshold = std::numeric_limits<double>::infinity();
  } else {
    const std::vector<CoarseQuery> coarse = coarse_queries(spec);
    std::vector<Point3> positions;
    positions.reserve(coarse.size());
    for (const auto& q : coarse) positions.push_back(q.position);
    const CurvatureField field = stage("curvature", [&] {
      return curvature_field(normalized, index, positions, config.r0, workers);
    });
    result.percentiles = field.percentiles;

    RadiusSchedule schedule = RadiusSchedule::from_percentiles(field.percentiles);
    schedule.s_max = config.s_max;
    schedule.s_min = config.s_min;
    schedule.alpha = config.alpha;
    schedule.beta = config.beta;
    schedule.r0 = config.r0;
    stage("schedule", [&] { schedule.validate(); });

    const double hot_threshold = std::max(config.refine_threshold.resolve(field.percentiles), config.refine_floor);
    const std::vector<std::size_t> hot = select_hot(field, hot_threshold);
    result.hot_queries = hot.size();
    std::vector<std::size_t> parents;
    const std::vector<std::size_t> refined = stage("refine", [&] { return grid.refine(hot, &parents); });

    queries.reserve(coarse.size() + refined.size());
    for (std::size_t c = 0; c < coarse.size(); ++c) {
      const double sigma = field.sigma[c].value_or(0.0);
      queries.push_back({coarse[c].fine_id, sigma, radius(schedule, sigma)});
    }
    const std::size_t first_refined = queries.size();
    for (std::size_t r = 0; r < refined.size(); ++r) {
      queries.push_back({refined[r], field.sigma[parents[r]].value_or(0.0), 0.0});
    }
    if (!config.inherit_sigma) {
      parallel_for(refined.size(), workers, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> ids;
        std::vector<Point3> region;
        for (std::size_t r = begin; r < end; ++r) {
          Query& q = queries[first_refined + r];
          index.radius_query(spec.fine_position(spec.fine_index(q.fine_id)), config.r0, ids);
          region.clear();
          for (std::uint32_t id : ids) region.push_back(normalized.points[id]);
          q.sigma = surface_variation(region);
        }
      });
    }
    for (std::size_t r = first_refined; r < queries.size(); ++r) queries[r].radius = radius(schedule, queries[r].sigma);
    policy.curvature_threshold = config.resample_threshold.resolve(field.percentiles);
  }
  timing.patch_time += seconds_since(clock);

  std::vector<Patch> patches;
  for (std::size_t start = 0; start < queries.size(); start += kBatchSize) {
    const std::size_t count = std::min(kBatchSize, queries.size() - start);
    patches.assign(count, Patch{});

    clock = Clock::now();
    parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t b = begin; b < end; ++b) {
        const Query& q = queries[start + b];
        const Point3 p = spec.fine_position(spec.fine_index(q.fine_id));
        patches[b] = make_patch(index, normalized, p, q.radius, q.sigma, policy, q.fine_id);
      }
    });
    timing.patch_time += seconds_since(clock);

    clock = Clock::now();
    stage("estimate", [&] {
      parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
          const Patch& patch = patches[b];
          const double value = patch.empty() ? estimate_far(patch.query, index, estimator->far_cap())
                                             : estimator->estimate(patch.query, patch);
          grid.set_value(queries[start + b].fine_id, value);
        }
      });
    });
    timing.udf_time += seconds_since(clock);
  }
  patches.clear();

  clock = Clock::now();
  stage("fill", [&] { hierarchical_fill(grid, workers); });
  timing.udf_time += seconds_since(clock);

  timing.evaluated_queries = grid.evaluated_count();
  timing.filled_queries = grid.filled_count();
  timing.total_fine_vertices = spec.fine_count();

  if (!config.field_dump.empty()) {
    stage("dump", [&] { write_dense_field(spec, grid.values(), config.field_dump); });
  }

  clock = Clock::now();
  const IsoSpec iso = config.epsilon > 0.0 ? IsoSpec{config.epsilon} : IsoSpec::half_fine_cell(spec);
  result.normalized_mesh = stage("extract", [&] { return marching_cubes(grid.values(), spec, iso, workers); });
  timing.extract_time = seconds_since(clock);

  result.mesh = denormalize_mesh(result.normalized_mesh, transform);
  result.fine_spacing = spec.fine_spacing();
  result.epsilon = iso.epsilon;
  return result;
}

ReconstructionResult reconstruct(const PipelineConfig& config) {
  const auto start = Clock::now();
  const PointCloud cloud = stage("read", [&] { return read_point_cloud(config.input); });
  const double load_time = seconds_since(start);
  ReconstructionResult result = run_pipeline(cloud, config);
  result.timing.patch_time += load_time;
  if (!config.output.empty()) stage("write", [&] { write_mesh(result.mesh, config.output); });
  return result;
}

std::string CurvatureTable::to_text() const {
  std::ostringstream out;
  const auto& p = field.percentiles;
  out << "# sigma10=" << number(p.p10) << " sigma40=" << number(p.p40) << " sigma60=" << number(p.p60)
      << " sigma90=" << number(p.p90) << '\n';
  out << "# queries=" << queries.size() << " with_sigma=" << field.sample_count() << '\n';
  out << "# coarse_id i j k x y z sigma\n";
  const int n = lattice.coarse_per_axis();
  for (std::size_t c = 0; c < queries.size(); ++c) {
    if (!field.sigma[c]) continue;
    const auto i = static_cast<int>(c / (static_cast<std::size_t>(n) * n));
    const auto j = static_cast<int>((c / n) % n);
    const auto k = static_cast<int>(c % n);
    const Point3 x = queries[c].position;
    out << c << ' ' << i << ' ' << j << ' ' << k << ' ' << number(x.x) << ' ' << number(x.y) << ' '
        << number(x.z) << ' ' << number(*field.sigma[c]) << '\n';
  }
  return out.str();
}

CurvatureTable curvature_table(const PointCloud& cloud, const PipelineConfig& config) {
  config.validate();
  CurvatureTable table;
  table.lattice = config.lattice();
  const auto normalized = stage("normalize", [&] { return normalize_cloud(cloud).first; });
  const SpatialIndex index(normalized.points);
  table.queries = coarse_queries(table.lattice);
  std::vector<Point3> positions;
  positions.reserve(table.queries.size());
  for (const auto& q : table.queries) positions.push_back(q.position);
  table.field = stage("curvature", [&] {
    return curvature_field(normalized, index, positions, config.r0, resolve_workers(config.workers));
  });
  return table;
}

std::string BenchReport::to_key_values() const {
  std::string out = adaptive.timing.to_key_values("adaptive.") + baseline.timing.to_key_values("baseline.");
  auto metrics = [](const MetricReport& m, const std::string& prefix) {
    std::istringstream lines(m.to_key_values());
    std::string line;
    std::string s;
    while (std::getline(lines, line)) s += prefix + line + "\n";
    return s;
  };
  out += metrics(adaptive_metrics, "adaptive.");
  out += metrics(baseline_metrics, "baseline.");
  out += "query_ratio=" + number(query_ratio) + "\n";
  out += "metric_frame=normalized\n";
  return out;
}

BenchReport bench(const PointCloud& cloud, const PointCloud& truth, const PipelineConfig& config) {
  PipelineConfig adaptive_cfg = config;
  adaptive_cfg.baseline_mode = false;
  PipelineConfig baseline_cfg = config;
  baseline_cfg.baseline_mode = true;

  BenchReport report;
  report.adaptive = run_pipeline(cloud, adaptive_cfg);
  report.baseline = run_pipeline(cloud, baseline_cfg);

  PointCloud truth_n;
  truth_n.normals = truth.normals;
  truth_n.points.reserve(truth.size());
  for (const Point3& p : truth.points) truth_n.points.push_back(report.adaptive.transform.apply(p));

  const unsigned workers = resolve_workers(config.workers);
  report.adaptive_metrics = stage("metrics", [&] {
    return evaluate_mesh(report.adaptive.normalized_mesh, truth_n, config.sample_count, config.seed, workers);
  });
  report.baseline_metrics = stage("metrics", [&] {
    return evaluate_mesh(report.baseline.normalized_mesh, truth_n, config.sample_count, config.seed, workers);
  });
  report.query_ratio = static_cast<double>(report.adaptive.timing.evaluated_queries) /
                       static_cast<double>(report.baseline.timing.evaluated_queries);
  return report;
}

}  // namespace adaptudf
