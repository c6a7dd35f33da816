#include "adaptudf/extract.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adaptudf/error.hpp"
#include "adaptudf/parallel.hpp"
#include "mc_tables.hpp"

namespace adaptudf {
namespace {

// Corner offsets in table order.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
// Cube edge -> (corner, corner).
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Keeps interpolated vertices strictly inside their edge so that vertices on
// distinct edges never coincide when a lattice value equals epsilon exactly.
constexpr double kEdgeClamp = 1e-7;

using EdgeKey = std::uint64_t;  // lower-endpoint fine id * 3 + axis

struct EdgeRef {
  std::size_t lower;
  int axis;
};

EdgeRef cube_edge(const LatticeSpec& spec, FineIndex base, int edge) {
  FineIndex a{base.i + kCorner[kEdgeCorners[edge][0]][0], base.j + kCorner[kEdgeCorners[edge][0]][1],
              base.k + kCorner[kEdgeCorners[edge][0]][2]};
  FineIndex b{base.i + kCorner[kEdgeCorners[edge][1]][0], base.j + kCorner[kEdgeCorners[edge][1]][1],
              base.k + kCorner[kEdgeCorners[edge][1]][2]};
  int axis = a.i != b.i ? 0 : (a.j != b.j ? 1 : 2);
  const FineIndex lo{std::min(a.i, b.i), std::min(a.j, b.j), std::min(a.k, b.k)};
  return {spec.fine_id(lo), axis};
}

}  // namespace

TriangleMesh marching_cubes(std::span<const double> field, const LatticeSpec& spec, const IsoSpec& iso,
                            unsigned workers) {
  spec.validate();
  if (!(iso.epsilon > 0.0)) throw Error(ErrorCode::InvalidInput, "iso offset must be positive");
  if (field.empty() || field.size() != spec.fine_count()) {
    throw Error(ErrorCode::EmptyField, "field has " + std::to_string(field.size()) + " values, lattice needs " +
                                           std::to_string(spec.fine_count()));
  }
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::isfinite(field[i])) {
      throw Error(ErrorCode::EmptyField, "field value " + std::to_string(i) + " is not populated");
    }
  }

  const int cells = spec.fine_cells();
  const double eps = iso.epsilon;
  const auto value = [&](FineIndex f) { return field[spec.fine_id(f)]; };

  // Pass 1: triangles as edge-key triples, per x-slab of cubes.
  std::vector<std::vector<std::array<EdgeKey, 3>>> slabs(static_cast<std::size_t>(cells));
  parallel_for(static_cast<std::size_t>(cells), workers, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<int>(begin); i < static_cast<int>(end); ++i) {
      auto& tris = slabs[static_cast<std::size_t>(i)];
      for (int j = 0; j < cells; ++j) {
        for (int k = 0; k < cells; ++k) {
          const FineIndex base{i, j, k};
          int cube = 0;
          for (int c = 0; c < 8; ++c) {
            if (value({i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]}) < eps) cube |= 1 << c;
          }
          if (detail::kEdgeTable[cube] == 0) continue;
          for (int t = 0; detail::kTriTable[cube][t] != -1; t += 3) {
            std::array<EdgeKey, 3> tri{};
            for (int v = 0; v < 3; ++v) {
              const EdgeRef e = cube_edge(spec, base, detail::kTriTable[cube][t + v]);
              tri[v] = static_cast<EdgeKey>(e.lower) * 3 + static_cast<EdgeKey>(e.axis);
            }
            tris.push_back(tri);
          }
        }
      }
    }
  });

  std::vector<EdgeKey> keys;
  std::size_t tri_count = 0;
  for (const auto& slab : slabs) tri_count += slab.size();
  keys.reserve(tri_count * 3);
  for (const auto& slab : slabs) {
    for (const auto& tri : slab) keys.insert(keys.end(), tri.begin(), tri.end());
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  // Pass 2: one vertex per crossed edge, interpolated linearly.
  TriangleMesh mesh;
  mesh.vertices.resize(keys.size());
  parallel_for(keys.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const auto lower = static_cast<std::size_t>(keys[v] / 3);
      const int axis = static_cast<int>(keys[v] % 3);
      const FineIndex a = spec.fine_index(lower);
      FineIndex b = a;
      (axis == 0 ? b.i : (axis == 1 ? b.j : b.k)) += 1;
      const double fa = value(a);
      const double fb = value(b);
      double t = (eps - fa) / (fb - fa);
      t = std::clamp(t, kEdgeClamp, 1.0 - kEdgeClamp);
      const Point3 pa = spec.fine_position(a);
      const Point3 pb = spec.fine_position(b);
      mesh.vertices[v] = pa + (pb - pa) * t;
    }
  });

  mesh.faces.reserve(tri_count);
  for (const auto& slab : slabs) {
    for (const auto& tri : slab) {
      Face f{};
      for (int v = 0; v < 3; ++v) {
        f[v] = static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), tri[v]) - keys.begin());
      }
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

}  // namespace adaptudf
