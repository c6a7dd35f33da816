#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "adaptudf/curvature.hpp"
#include "adaptudf/model.hpp"

namespace adaptudf {

struct FineIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  friend constexpr bool operator==(FineIndex, FineIndex) noexcept = default;
};

/// Two-resolution lattice over the cube [-0.5 - m*h, 0.5 + m*h]^3, where h is
/// the coarse spacing and m = margin_cells. Coarse vertex (i, j, k) sits at
/// fine vertex (2i, 2j, 2k). Ids are lexicographic with z varying fastest.
struct LatticeSpec {
  int coarse_cells = 128;
  int margin_cells = 3;

  /// Throws InvalidConfig unless coarse_cells > 2 * margin_cells >= 0.
  void validate() const;

  int fine_cells() const noexcept { return 2 * coarse_cells; }
  int coarse_per_axis() const noexcept { return coarse_cells + 1; }
  int fine_per_axis() const noexcept { return fine_cells() + 1; }
  std::size_t coarse_count() const noexcept;
  std::size_t fine_count() const noexcept;

  double coarse_spacing() const noexcept { return 1.0 / (coarse_cells - 2 * margin_cells); }
  double fine_spacing() const noexcept { return 0.5 * coarse_spacing(); }
  double domain_min() const noexcept { return -0.5 - margin_cells * coarse_spacing(); }

  std::size_t fine_id(FineIndex f) const noexcept {
    const auto n = static_cast<std::size_t>(fine_per_axis());
    return (static_cast<std::size_t>(f.i) * n + static_cast<std::size_t>(f.j)) * n + static_cast<std::size_t>(f.k);
  }
  FineIndex fine_index(std::size_t id) const noexcept {
    const auto n = static_cast<std::size_t>(fine_per_axis());
    return {static_cast<int>(id / (n * n)), static_cast<int>((id / n) % n), static_cast<int>(id % n)};
  }
  std::size_t coarse_to_fine(std::size_t coarse_id) const noexcept;
  Point3 fine_position(FineIndex f) const noexcept {
    const double h = fine_spacing();
    const double lo = domain_min();
    return {lo + f.i * h, lo + f.j * h, lo + f.k * h};
  }
};

enum class FineClass : std::uint8_t { Vertex, EdgeMid, FaceCenter, CellCenter };

/// By the number of odd index components: 0, 1, 2 or 3.
constexpr FineClass classify_fine(FineIndex f) noexcept {
  const int odd = (f.i & 1) + (f.j & 1) + (f.k & 1);
  return static_cast<FineClass>(odd);
}

/// Evaluation status of a fine vertex.
enum class VertexTag : std::uint8_t { Unset, Coarse, Refined, Edge, Face, Cell };

struct CoarseQuery {
  std::size_t fine_id = 0;
  Point3 position{};
};

/// All coarse vertices in lexicographic order; entry i is coarse id i.
std::vector<CoarseQuery> coarse_queries(const LatticeSpec& spec);

/// Dense fine lattice holding, per vertex, how its value was obtained. Coarse
/// vertices start out tagged Coarse with no value (NaN).
class AdaptiveGrid {
 public:
  explicit AdaptiveGrid(LatticeSpec spec);

  const LatticeSpec& spec() const noexcept { return spec_; }
  VertexTag tag(std::size_t fine_id) const noexcept { return tags_[fine_id]; }
  double value(std::size_t fine_id) const noexcept { return values_[fine_id]; }
  void set_value(std::size_t fine_id, double v) noexcept { values_[fine_id] = v; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const VertexTag> tags() const noexcept { return tags_; }

  bool is_evaluated(std::size_t fine_id) const noexcept {
    return tags_[fine_id] == VertexTag::Coarse || tags_[fine_id] == VertexTag::Refined;
  }
  std::size_t evaluated_count() const noexcept;
  std::size_t filled_count() const noexcept;

  /// Add the clipped 3x3x3 fine block around each hot coarse vertex, skipping
  /// vertices already evaluated. Returns the new fine ids, ascending. When
  /// `parents` is given it receives, per new id, the first hot coarse id (in
  /// input order) whose block claimed it. Throws NotCoarseVertex.
  std::vector<std::size_t> refine(std::span<const std::size_t> hot_coarse_ids,
                                  std::vector<std::size_t>* parents = nullptr);

  /// Mark every not-yet-evaluated fine vertex Refined (uniform fine sampling).
  std::vector<std::size_t> refine_all();

 private:
  friend void hierarchical_fill(AdaptiveGrid& grid, unsigned workers);

  LatticeSpec spec_;
  std::vector<VertexTag> tags_;
  std::vector<double> values_;
};

/// Fill every unevaluated fine vertex by plain averaging, in three passes:
/// edge midpoints from their two edge endpoints, then face centers from their
/// four edge midpoints, then cell centers from their six face centers.
/// Evaluated values are never overwritten. Throws MissingCoarseValue if an
/// evaluated vertex has no finite value.
void hierarchical_fill(AdaptiveGrid& grid, unsigned workers = 1);

/// Coarse ids whose curvature sample exists and is >= threshold, ascending.
std::vector<std::size_t> select_hot(const CurvatureField& field, double threshold);

/// Dense fine-lattice field as raw float32 values (z fastest) plus a text
/// sidecar "<path>.hdr" holding "nx ny nz margin_cells".
struct DenseField {
  LatticeSpec spec;
  std::vector<double> values;
};

void write_dense_field(const LatticeSpec& spec, std::span<const double> values, const std::filesystem::path& path);
DenseField read_dense_field(const std::filesystem::path& path);

}  // namespace adaptudf
