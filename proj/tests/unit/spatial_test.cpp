#include <gtest/gtest.h>

#include "adaptudf/error.hpp"
#include "adaptudf/spatial.hpp"
#include "test_support.hpp"

namespace adaptudf {
namespace {

TEST(SpatialIndex, RadiusQueryMatchesBruteForce) {
  testing::Rng rng(11);
  for (std::size_t leaf : {1u, 4u, 16u, 64u}) {
    const PointCloud cloud = testing::random_cloud(rng, 2000);
    const SpatialIndex index(cloud.points, leaf);
    std::vector<std::uint32_t> buffer;
    for (int q = 0; q < 200; ++q) {
      const Point3 c = rng.point(-0.7, 0.7);
      const double r = rng.uniform(0.01, 0.3);
      const auto want = testing::brute_radius(cloud.points, c, r);
      EXPECT_EQ(index.radius_query(c, r), want);
      index.radius_query(c, r, buffer);
      EXPECT_EQ(buffer, want);
    }
  }
}

TEST(SpatialIndex, RadiusQueryIsClosed) {
  const std::vector<Point3> pts = {{0, 0, 0}, {0.5, 0, 0}, {0.5000001, 0, 0}};
  const SpatialIndex index(pts);
  EXPECT_EQ(index.radius_query({0, 0, 0}, 0.5), (std::vector<std::uint32_t>{0, 1}));
}

TEST(SpatialIndex, NearestMatchesBruteForce) {
  testing::Rng rng(12);
  const PointCloud cloud = testing::random_cloud(rng, 3000);
  const SpatialIndex index(cloud.points);
  for (int q = 0; q < 500; ++q) {
    const Point3 p = rng.point(-1, 1);
    const Neighbor n = index.nearest(p);
    EXPECT_EQ(n.index, testing::brute_nearest_index(cloud.points, p));
    EXPECT_EQ(n.distance, testing::brute_nearest(cloud.points, p));
  }
}

TEST(SpatialIndex, DuplicatesAndTies) {
  std::vector<Point3> pts(50, Point3{0.25, 0.25, 0.25});
  pts.push_back({1, 1, 1});
  const SpatialIndex index(pts, 2);
  EXPECT_EQ(index.nearest({0.25, 0.25, 0.25}).index, 0u);
  EXPECT_EQ(index.radius_query({0.25, 0.25, 0.25}, 1e-9).size(), 50u);

  const std::vector<Point3> sym = {{1, 0, 0}, {-1, 0, 0}};
  EXPECT_EQ(SpatialIndex(sym).nearest({0, 0, 0}).index, 0u);
}

TEST(SpatialIndex, Errors) {
  const std::vector<Point3> pts = {{0, 0, 0}};
  const SpatialIndex index(pts);
  EXPECT_THROW(index.radius_query({0, 0, 0}, 0.0), Error);
  EXPECT_THROW(build_index(PointCloud{}), Error);
}

TEST(SpatialIndex, SmallCases) {
  const std::vector<Point3> one = {{0.2, 0.3, 0.4}};
  const SpatialIndex single(one);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(single.radius_query({0.2, 0.3, 0.4}, 1e-12), (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(single.nearest_distance({0.2, 0.3, 0.4}), 0.0);

  const std::vector<Point3> two = {{0, 0, 0}, {1, 0, 0}};
  EXPECT_EQ(SpatialIndex(two).radius_query({0, 0, 0}, 0.5), (std::vector<std::uint32_t>{0}));
  const std::vector<Point3> unit_x = {{1, 0, 0}};
  EXPECT_EQ(SpatialIndex(unit_x).nearest_distance({0, 0, 0}), 1.0);
}

TEST(SpatialIndex, TenThousandPointsAgainstBruteForce) {
  testing::Rng rng(13);
  const PointCloud cloud = testing::random_cloud(rng, 10000);
  const SpatialIndex index = build_index(cloud);
  for (int q = 0; q < 100; ++q) {
    const Point3 c = rng.point();
    EXPECT_EQ(index.radius_query(c, 0.08), testing::brute_radius(cloud.points, c, 0.08));
  }
  for (int q = 0; q < 1000; ++q) {
    const Point3 c = rng.point(-0.8, 0.8);
    EXPECT_NEAR(index.nearest_distance(c), testing::brute_nearest(cloud.points, c), 1e-12);
  }
}

}  // namespace
}  // namespace adaptudf
