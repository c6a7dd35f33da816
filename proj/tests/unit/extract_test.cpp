#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "adaptudf/error.hpp"
#include "adaptudf/extract.hpp"
#include "test_support.hpp"

namespace adaptudf {
namespace {

std::vector<double> sample(const LatticeSpec& s, auto&& f) {
  std::vector<double> v(s.fine_count());
  for (std::size_t id = 0; id < v.size(); ++id) v[id] = f(s.fine_position(s.fine_index(id)));
  return v;
}

TEST(MarchingCubes, SphereIsClosedAndAccurate) {
  const LatticeSpec s{16, 3};
  const double r = 0.3;
  const auto field = sample(s, [](Point3 p) { return norm(p); });
  const TriangleMesh mesh = marching_cubes(field, s, IsoSpec{r});
  ASSERT_FALSE(mesh.faces.empty());
  EXPECT_NO_THROW(mesh.validate());
  for (const Point3& v : mesh.vertices) EXPECT_NEAR(norm(v), r, 2e-3);
  // closed: every undirected edge appears exactly twice
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  for (const Face& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const auto a = f[e], b = f[(e + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [edge, n] : edges) EXPECT_EQ(n, 2);
}

TEST(MarchingCubes, LinearFieldIsInterpolatedExactly) {
  const LatticeSpec s{8, 1};
  const auto field = sample(s, [](Point3 p) { return 0.3 * p.x + 0.4 * p.y + p.z; });
  const TriangleMesh mesh = marching_cubes(field, s, IsoSpec{0.02});
  ASSERT_FALSE(mesh.faces.empty());
  for (const Point3& v : mesh.vertices) EXPECT_NEAR(0.3 * v.x + 0.4 * v.y + v.z, 0.02, 1e-12);
}

TEST(MarchingCubes, OffsetShellsOfALatticePlane) {
  const LatticeSpec s{8, 1};
  // z = 0 is a lattice plane, so the field is linear on every crossed edge
  const auto field = sample(s, [](Point3 p) { return std::abs(p.z); });
  const TriangleMesh mesh = marching_cubes(field, s, IsoSpec{0.02});
  ASSERT_FALSE(mesh.faces.empty());
  std::size_t above = 0;
  for (const Point3& v : mesh.vertices) {
    EXPECT_NEAR(std::abs(v.z), 0.02, 1e-12);
    above += v.z > 0;
  }
  EXPECT_EQ(2 * above, mesh.vertices.size());
}

TEST(MarchingCubes, NoCrossingNoMesh) {
  const LatticeSpec s{8, 1};
  const std::vector<double> field(s.fine_count(), 1.0);
  const TriangleMesh mesh = marching_cubes(field, s, IsoSpec{0.5});
  EXPECT_TRUE(mesh.vertices.empty());
  EXPECT_TRUE(mesh.faces.empty());
}

TEST(MarchingCubes, WorkerCountDoesNotChangeOutput) {
  const LatticeSpec s{16, 3};
  const auto field = sample(s, [](Point3 p) { return std::abs(norm(p - Point3{0.05, 0, 0}) - 0.25); });
  const IsoSpec iso = IsoSpec::half_fine_cell(s);
  const TriangleMesh a = marching_cubes(field, s, iso, 1);
  const TriangleMesh b = marching_cubes(field, s, iso, 4);
  EXPECT_EQ(a.vertices, b.vertices);
  EXPECT_EQ(a.faces, b.faces);
}

TEST(MarchingCubes, Errors) {
  const LatticeSpec s{8, 1};
  std::vector<double> field(s.fine_count(), 1.0);
  EXPECT_THROW(marching_cubes(field, s, IsoSpec{0.0}), Error);
  EXPECT_THROW(marching_cubes(std::span<const double>(field).first(10), s, IsoSpec{0.1}), Error);
  field[5] = std::nan("");
  try {
    marching_cubes(field, s, IsoSpec{0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyField);
  }
}

TEST(MarchingCubes, SingleLowVertexGivesOctahedron) {
  const LatticeSpec s{8, 1};
  std::vector<double> field(s.fine_count(), 1.0);
  field[s.fine_id({8, 8, 8})] = 0.0;
  const TriangleMesh mesh = marching_cubes(field, s, IsoSpec{0.5});
  EXPECT_EQ(mesh.faces.size(), 8u);
  EXPECT_EQ(mesh.vertices.size(), 6u);
  const Point3 center = s.fine_position({8, 8, 8});
  for (const Point3& v : mesh.vertices) EXPECT_NEAR(distance(v, center), 0.5 * s.fine_spacing(), 1e-12);
}

TEST(MarchingCubes, SphereUdfGivesTwoShells) {
  const LatticeSpec s{24, 3};
  const auto field = sample(s, [](Point3 p) { return std::abs(norm(p) - 0.3); });
  const IsoSpec iso = IsoSpec::half_fine_cell(s);
  const TriangleMesh mesh = marching_cubes(field, s, iso);
  std::size_t inner = 0, outer = 0;
  for (const Point3& v : mesh.vertices) {
    const double r = norm(v);
    (r < 0.3 ? inner : outer)++;
    const double shell = r < 0.3 ? 0.3 - iso.epsilon : 0.3 + iso.epsilon;
    EXPECT_NEAR(r, shell, s.fine_spacing());
  }
  EXPECT_GT(inner, 0u);
  EXPECT_GT(outer, 0u);
}

}  // namespace
}  // namespace adaptudf
