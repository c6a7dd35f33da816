// adaptudf command-line entry point.
//
//   adaptudf reconstruct  --input cloud.ply --output mesh.obj [pipeline flags]
//   adaptudf curvature    --input cloud.ply [--table out.txt]
//   adaptudf metrics      --mesh mesh.obj --gt truth.xyz
//   adaptudf bench        --input cloud.xyz [--gt truth.xyz]
//   adaptudf make-fixture --kind sphere --output sphere.xyz

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "adaptudf/error.hpp"
#include "adaptudf/io.hpp"
#include "adaptudf/metrics.hpp"
#include "adaptudf/pipeline.hpp"

namespace {

using adaptudf::PipelineConfig;

// Settings collected from the command line, applied after the config file so
// that flags win.
struct PipelineFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_file.empty()) adaptudf::apply_config_file(cfg, config_file);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    return cfg;
  }
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& flags) {
  app->add_option("--config", flags.config_file, "key=value config file (flags override it)");
  const std::vector<std::pair<std::string, std::string>> options = {
      {"input", "input point cloud (.xyz, .ply, .obj)"},
      {"output", "output mesh (.obj)"},
      {"ground-truth", "ground-truth cloud with normals (bench)"},
      {"field-dump", "write the dense fine field (float32) here"},
      {"coarse-cells", "coarse lattice cells per axis (default 128)"},
      {"margin-cells", "domain margin in coarse cells (default 3)"},
      {"r0", "nominal patch radius, normalized units (default 0.018)"},
      {"s-max", "radius dilation in flat regions (default 1.35)"},
      {"s-min", "radius shrink in curved regions (default 2/3)"},
      {"alpha", "exponent of the dilation ramp (default 0.5)"},
      {"beta", "exponent of the shrink ramp (default 1.5)"},
      {"refine-threshold", "p10|p40|p60|p90|<sigma> (default p60)"},
      {"refine-floor", "never refine below this sigma (default 1e-9)"},
      {"inherit-sigma", "refined queries reuse the parent's sigma (default true)"},
      {"target-count", "samples per patch (default 64)"},
      {"resample-threshold", "p10|p40|p60|p90|<sigma> (default p60)"},
      {"seed", "random seed (default 0)"},
      {"estimator", "plane|nearest (default plane)"},
      {"far-cap", "distance cap for empty patches (default 0.1)"},
      {"epsilon", "iso offset; 0 = half a fine cell (default 0)"},
      {"sample-count", "mesh samples for metrics (default 100000)"},
      {"workers", "worker threads; 0 = all cores (default 1)"},
  };
  for (const auto& [key, help] : options) {
    app->add_option_function<std::string>(
        "--" + key, [&flags, key = key](const std::string& v) { flags.overrides.emplace_back(key, v); }, help);
  }
  app->add_flag_function(
      "--baseline", [&flags](std::int64_t) { flags.overrides.emplace_back("baseline", "true"); },
      "uniform fine lattice with fixed radius");
}

int run_reconstruct(const PipelineFlags& flags) {
  const PipelineConfig cfg = flags.resolve();
  if (cfg.input.empty()) throw adaptudf::Error(adaptudf::ErrorCode::InvalidConfig, "--input is required");
  const auto result = adaptudf::reconstruct(cfg);
  std::cout << result.timing.to_key_values();
  std::cout << "vertices=" << result.mesh.vertices.size() << "\nfaces=" << result.mesh.faces.size() << '\n';
  std::cout << "hot_queries=" << result.hot_queries << '\n';
  if (result.percentiles) {
    const auto& p = *result.percentiles;
    std::cout << "sigma10=" << p.p10 << "\nsigma40=" << p.p40 << "\nsigma60=" << p.p60 << "\nsigma90=" << p.p90
              << '\n';
  }
  return 0;
}

int run_curvature(const PipelineFlags& flags, const std::string& table_path) {
  const PipelineConfig cfg = flags.resolve();
  if (cfg.input.empty()) throw adaptudf::Error(adaptudf::ErrorCode::InvalidConfig, "--input is required");
  const auto cloud = adaptudf::read_point_cloud(cfg.input);
  const auto table = adaptudf::curvature_table(cloud, cfg);
  const std::string text = table.to_text();
  if (table_path.empty()) {
    std::cout << text;
  } else {
    adaptudf::write_file(table_path, text);
    const auto& p = table.field.percentiles;
    std::cout << "sigma10=" << p.p10 << "\nsigma40=" << p.p40 << "\nsigma60=" << p.p60 << "\nsigma90=" << p.p90
              << "\nwith_sigma=" << table.field.sample_count() << '\n';
  }
  return 0;
}

int run_bench(const PipelineFlags& flags) {
  const PipelineConfig cfg = flags.resolve();
  if (cfg.input.empty()) throw adaptudf::Error(adaptudf::ErrorCode::InvalidConfig, "--input is required");
  const auto cloud = adaptudf::read_point_cloud(cfg.input);
  const auto truth = cfg.ground_truth.empty() ? cloud : adaptudf::read_point_cloud(cfg.ground_truth);
  const auto report = adaptudf::bench(cloud, truth, cfg);
  std::cout << report.to_key_values();
  if (!cfg.output.empty()) adaptudf::write_mesh(report.adaptive.mesh, cfg.output);
  return 0;
}

struct MetricsArgs {
  std::string mesh;
  std::string gt;
  std::string gt_mesh;
  std::size_t samples = adaptudf::kDefaultSampleCount;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool record = false;
};

int run_metrics(const MetricsArgs& args) {
  const auto mesh = adaptudf::read_mesh(args.mesh);
  adaptudf::PointCloud truth;
  if (!args.gt_mesh.empty()) {
    truth = adaptudf::sample_mesh(adaptudf::read_mesh(args.gt_mesh), args.samples, args.seed + 1);
  } else {
    truth = adaptudf::read_point_cloud(args.gt);
  }
  const auto report = adaptudf::evaluate_mesh(mesh, truth, args.samples, args.seed, args.workers);
  std::cout << (args.record ? report.to_record() + "\n" : report.to_key_values());
  return 0;
}

struct FixtureArgs {
  std::string kind = "sphere";
  std::string output;
  adaptudf::FixtureSpec spec;
};

int run_make_fixture(FixtureArgs args) {
  args.spec.kind = adaptudf::parse_fixture_kind(args.kind);
  const auto cloud = adaptudf::make_fixture(args.spec);
  adaptudf::write_point_cloud_xyz(cloud, args.output);
  std::cout << "points=" << cloud.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature-adaptive unsigned-distance surface reconstruction"};
  app.require_subcommand(1);

  PipelineFlags reconstruct_flags;
  auto* reconstruct = app.add_subcommand("reconstruct", "point cloud -> mesh");
  add_pipeline_flags(reconstruct, reconstruct_flags);

  PipelineFlags curvature_flags;
  std::string table_path;
  auto* curvature = app.add_subcommand("curvature", "per-query surface variation and percentiles");
  add_pipeline_flags(curvature, curvature_flags);
  curvature->add_option("--table", table_path, "write the table here instead of stdout");

  PipelineFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "adaptive vs uniform-fine comparison");
  add_pipeline_flags(bench, bench_flags);
  bench->add_option_function<std::string>(
      "--gt", [&bench_flags](const std::string& v) { bench_flags.overrides.emplace_back("ground-truth", v); },
      "alias of --ground-truth");

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "CD / F1 / NC of a mesh against ground truth");
  metrics->add_option("--mesh", metrics_args.mesh, "reconstructed mesh (.obj)")->required();
  auto* gt_opt = metrics->add_option("--gt", metrics_args.gt, "ground-truth cloud with normals");
  auto* gt_mesh_opt = metrics->add_option("--gt-mesh", metrics_args.gt_mesh, "ground-truth mesh (.obj), sampled");
  gt_opt->excludes(gt_mesh_opt);
  metrics->add_option("--sample-count", metrics_args.samples, "mesh samples");
  metrics->add_option("--seed", metrics_args.seed, "sampling seed");
  metrics->add_option("--workers", metrics_args.workers, "worker threads");
  metrics->add_flag("--record", metrics_args.record, "print a single-line record");

  FixtureArgs fixture_args;
  auto* fixture = app.add_subcommand("make-fixture", "write an analytic test cloud (.xyz with normals)");
  fixture->add_option("--kind", fixture_args.kind, "sphere|cube|sheets");
  fixture->add_option("--output", fixture_args.output, "output .xyz")->required();
  fixture->add_option("--count", fixture_args.spec.count, "number of points");
  fixture->add_option("--seed", fixture_args.spec.seed, "random seed");
  fixture->add_option("--radius", fixture_args.spec.radius, "sphere radius / cube half-side");
  fixture->add_option("--gap", fixture_args.spec.gap, "sheet separation");
  fixture->add_option("--noise", fixture_args.spec.noise, "normal jitter standard deviation");

  CLI11_PARSE(app, argc, argv);

  const std::string where = app.get_subcommands().front()->get_name();
  try {
    if (reconstruct->parsed()) return run_reconstruct(reconstruct_flags);
    if (curvature->parsed()) return run_curvature(curvature_flags, table_path);
    if (bench->parsed()) return run_bench(bench_flags);
    if (metrics->parsed()) {
      if (metrics_args.gt.empty() && metrics_args.gt_mesh.empty()) {
        throw adaptudf::Error(adaptudf::ErrorCode::InvalidConfig, "--gt or --gt-mesh is required");
      }
      return run_metrics(metrics_args);
    }
    if (fixture->parsed()) return run_make_fixture(fixture_args);
  } catch (const adaptudf::Error& e) {
    std::cerr << "error [" << where << "] " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [" << where << "] " << e.what() << '\n';
    return 3;
  }
  return 1;
}
