#include <gtest/gtest.h>

#include <filesystem>

#include "adaptudf/error.hpp"
#include "adaptudf/io.hpp"
#include "adaptudf/pipeline.hpp"
#include "test_support.hpp"

namespace adaptudf {
namespace {

PipelineConfig small_config() {
  PipelineConfig cfg;
  cfg.coarse_cells = 24;
  cfg.r0 = 0.05;
  cfg.sample_count = 5000;
  return cfg;
}

PointCloud small_sphere() {
  FixtureSpec spec;
  spec.count = 6000;
  spec.seed = 4;
  return make_fixture(spec);
}

TEST(ThresholdSelector, ParseResolve) {
  const CurvaturePercentiles p{0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(ThresholdSelector::parse("p10").resolve(p), 0.1);
  EXPECT_EQ(ThresholdSelector::parse(" p90 ").resolve(p), 0.4);
  EXPECT_EQ(ThresholdSelector::parse("0.25").resolve(p), 0.25);
  EXPECT_EQ(ThresholdSelector::parse("0.25").to_string(), "0.25");
  EXPECT_THROW(ThresholdSelector::parse("p50"), Error);
  EXPECT_THROW(ThresholdSelector::parse("-1"), Error);
}

TEST(PipelineConfig, SetAndValidate) {
  PipelineConfig cfg;
  cfg.set("coarse_cells", "32");
  cfg.set("s-max", "1.5");
  cfg.set("inherit-sigma", "false");
  cfg.set("refine-threshold", "p90");
  EXPECT_EQ(cfg.coarse_cells, 32);
  EXPECT_EQ(cfg.s_max, 1.5);
  EXPECT_FALSE(cfg.inherit_sigma);
  EXPECT_NE(cfg.to_key_values().find("refine-threshold=p90\n"), std::string::npos);
  EXPECT_THROW(cfg.set("bogus", "1"), Error);
  EXPECT_THROW(cfg.set("r0", "abc"), Error);
  cfg.estimator = "neural";
  EXPECT_THROW(cfg.validate(), Error);
  cfg = PipelineConfig{};
  cfg.s_min = 1.1;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(PipelineConfig, ConfigFile) {
  const auto path = std::filesystem::temp_directory_path() / "adaptudf_pipeline.cfg";
  write_file(path, "# comment\ncoarse-cells = 40\n\nestimator=nearest # trailing\n");
  PipelineConfig cfg;
  apply_config_file(cfg, path);
  EXPECT_EQ(cfg.coarse_cells, 40);
  EXPECT_EQ(cfg.estimator, "nearest");
  write_file(path, "coarse-cells 40\n");
  EXPECT_THROW(apply_config_file(cfg, path), Error);
  std::filesystem::remove(path);
}

TEST(RunPipeline, SphereAccountingAndQuality) {
  const PointCloud cloud = small_sphere();
  const PipelineConfig cfg = small_config();
  const auto result = run_pipeline(cloud, cfg);
  const auto& t = result.timing;
  EXPECT_EQ(t.total_fine_vertices, cfg.lattice().fine_count());
  EXPECT_EQ(t.evaluated_queries + t.filled_queries, t.total_fine_vertices);
  EXPECT_GT(t.evaluated_queries, cfg.lattice().coarse_count());
  EXPECT_GT(result.hot_queries, 0u);
  ASSERT_TRUE(result.percentiles);
  EXPECT_LE(result.percentiles->p10, result.percentiles->p90);
  ASSERT_FALSE(result.mesh.faces.empty());
  EXPECT_NO_THROW(result.mesh.validate());
  // mesh vertices sit near the input sphere (radius 0.3 in input units)
  for (const Point3& v : result.mesh.vertices) EXPECT_NEAR(norm(v), 0.3, 0.03);
  EXPECT_DOUBLE_EQ(result.epsilon, 0.5 * result.fine_spacing);
}

TEST(RunPipeline, BaselineEvaluatesEveryFineVertex) {
  PipelineConfig cfg = small_config();
  cfg.baseline_mode = true;
  const auto result = run_pipeline(small_sphere(), cfg);
  EXPECT_EQ(result.timing.evaluated_queries, cfg.lattice().fine_count());
  EXPECT_EQ(result.timing.filled_queries, 0u);
  EXPECT_FALSE(result.percentiles);
}

TEST(RunPipeline, PlanarCloudBarelyRefines) {
  testing::Rng rng(91);
  PointCloud plane;
  for (int i = 0; i < 8000; ++i) plane.points.push_back({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0.0});
  plane.points.push_back({0.5, 0.5, 0.0});
  plane.points.push_back({-0.5, -0.5, 0.0});
  const PipelineConfig cfg = small_config();
  const auto result = run_pipeline(plane, cfg);
  EXPECT_LT(static_cast<double>(result.timing.evaluated_queries),
            1.05 * static_cast<double>(cfg.lattice().coarse_count()));
}

TEST(RunPipeline, DeterministicAcrossWorkers) {
  const PointCloud cloud = small_sphere();
  PipelineConfig cfg = small_config();
  const auto a = run_pipeline(cloud, cfg);
  cfg.workers = 4;
  const auto b = run_pipeline(cloud, cfg);
  EXPECT_EQ(format_mesh_obj(a.mesh), format_mesh_obj(b.mesh));
}

TEST(RunPipeline, ErrorsAreStageTagged) {
  try {
    run_pipeline(PointCloud{}, small_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
    EXPECT_NE(std::string(e.what()).find("[normalize]"), std::string::npos) << e.what();
  }
}

TEST(CurvatureTable, TextListsQueriesWithSigma) {
  const auto table = curvature_table(small_sphere(), small_config());
  const std::string text = table.to_text();
  EXPECT_EQ(text.rfind("# sigma10=", 0), 0u);
  std::size_t rows = 0;
  for (char c : text) rows += c == '\n';
  EXPECT_EQ(rows, 3 + table.field.sample_count());
}

TEST(Bench, AdaptiveUsesFewerQueries) {
  const PointCloud cloud = small_sphere();
  const auto report = bench(cloud, cloud, small_config());
  EXPECT_LT(report.query_ratio, 1.0);
  EXPECT_LT(report.adaptive_metrics.cd, 1.5 * report.baseline_metrics.cd);
  const std::string kv = report.to_key_values();
  EXPECT_NE(kv.find("adaptive.cd_x1000="), std::string::npos);
  EXPECT_NE(kv.find("baseline.evaluated_queries="), std::string::npos);
  EXPECT_NE(kv.find("query_ratio="), std::string::npos);
}

TEST(Fixtures, Shapes) {
  FixtureSpec spec;
  spec.count = 1000;
  const PointCloud sphere = make_fixture(spec);
  ASSERT_EQ(sphere.size(), 1000u);
  for (std::size_t i = 0; i < sphere.size(); ++i) {
    EXPECT_NEAR(norm(sphere.points[i]), 0.3, 1e-12);
    EXPECT_NEAR(norm(sphere.normals[i]), 1.0, 1e-12);
  }
  spec.kind = FixtureKind::Sheets;
  const PointCloud sheets = make_fixture(spec);
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    EXPECT_EQ(sheets.points[i].z, i < 500 ? -0.0225 : 0.0225);
  }
  spec.kind = FixtureKind::Cube;
  for (const Point3& p : make_fixture(spec).points) {
    EXPECT_NEAR(std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)}), 0.3, 1e-15);
  }
  EXPECT_THROW(parse_fixture_kind("torus"), Error);
  spec.count = 2;
  EXPECT_THROW(make_fixture(spec), Error);
}

}  // namespace
}  // namespace adaptudf
