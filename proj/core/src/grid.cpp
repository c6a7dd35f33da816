#include "adaptudf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>

#include "adaptudf/error.hpp"
#include "adaptudf/io.hpp"
#include "adaptudf/parallel.hpp"

namespace adaptudf {

void LatticeSpec::validate() const {
  if (coarse_cells < 1) throw Error(ErrorCode::InvalidConfig, "coarse_cells must be at least 1");
  if (margin_cells < 0) throw Error(ErrorCode::InvalidConfig, "margin_cells must be non-negative");
  if (coarse_cells <= 2 * margin_cells) {
    throw Error(ErrorCode::InvalidConfig, "coarse_cells must exceed twice margin_cells");
  }
  if (fine_per_axis() > 4096) throw Error(ErrorCode::InvalidConfig, "lattice too large");
}

std::size_t LatticeSpec::coarse_count() const noexcept {
  const auto n = static_cast<std::size_t>(coarse_per_axis());
  return n * n * n;
}

std::size_t LatticeSpec::fine_count() const noexcept {
  const auto n = static_cast<std::size_t>(fine_per_axis());
  return n * n * n;
}

std::size_t LatticeSpec::coarse_to_fine(std::size_t coarse_id) const noexcept {
  const auto n = static_cast<std::size_t>(coarse_per_axis());
  const auto ci = static_cast<int>(coarse_id / (n * n));
  const auto cj = static_cast<int>((coarse_id / n) % n);
  const auto ck = static_cast<int>(coarse_id % n);
  return fine_id({2 * ci, 2 * cj, 2 * ck});
}

std::vector<CoarseQuery> coarse_queries(const LatticeSpec& spec) {
  spec.validate();
  std::vector<CoarseQuery> out;
  out.reserve(spec.coarse_count());
  const int n = spec.coarse_per_axis();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const FineIndex f{2 * i, 2 * j, 2 * k};
        out.push_back({spec.fine_id(f), spec.fine_position(f)});
      }
    }
  }
  return out;
}

AdaptiveGrid::AdaptiveGrid(LatticeSpec spec) : spec_(spec) {
  spec_.validate();
  tags_.assign(spec_.fine_count(), VertexTag::Unset);
  values_.assign(spec_.fine_count(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < spec_.coarse_count(); ++c) tags_[spec_.coarse_to_fine(c)] = VertexTag::Coarse;
}

std::size_t AdaptiveGrid::evaluated_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(tags_.begin(), tags_.end(), [](VertexTag t) {
    return t == VertexTag::Coarse || t == VertexTag::Refined;
  }));
}

std::size_t AdaptiveGrid::filled_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(tags_.begin(), tags_.end(), [](VertexTag t) {
    return t == VertexTag::Edge || t == VertexTag::Face || t == VertexTag::Cell;
  }));
}

std::vector<std::size_t> AdaptiveGrid::refine(std::span<const std::size_t> hot_coarse_ids,
                                              std::vector<std::size_t>* parents) {
  const int last = spec_.fine_cells();
  std::vector<std::pair<std::size_t, std::size_t>> added;
  for (std::size_t hot : hot_coarse_ids) {
    if (hot >= spec_.coarse_count()) {
      throw Error(ErrorCode::NotCoarseVertex, "coarse id " + std::to_string(hot) + " out of range");
    }
    const FineIndex c = spec_.fine_index(spec_.coarse_to_fine(hot));
    if (tags_[spec_.fine_id(c)] != VertexTag::Coarse) {
      throw Error(ErrorCode::NotCoarseVertex, "coarse id " + std::to_string(hot) + " is not an evaluated coarse vertex");
    }
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int d = -1; d <= 1; ++d) {
          const FineIndex f{c.i + a, c.j + b, c.k + d};
          if (f.i < 0 || f.j < 0 || f.k < 0 || f.i > last || f.j > last || f.k > last) continue;
          const std::size_t id = spec_.fine_id(f);
          if (tags_[id] != VertexTag::Unset) continue;
          tags_[id] = VertexTag::Refined;
          added.emplace_back(id, hot);
        }
      }
    }
  }
  std::sort(added.begin(), added.end());
  std::vector<std::size_t> ids;
  ids.reserve(added.size());
  if (parents) {
    parents->clear();
    parents->reserve(added.size());
  }
  for (const auto& [id, parent] : added) {
    ids.push_back(id);
    if (parents) parents->push_back(parent);
  }
  return ids;
}

std::vector<std::size_t> AdaptiveGrid::refine_all() {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < tags_.size(); ++id) {
    if (tags_[id] == VertexTag::Unset) {
      tags_[id] = VertexTag::Refined;
      ids.push_back(id);
    }
  }
  return ids;
}

void hierarchical_fill(AdaptiveGrid& grid, unsigned workers) {
  const LatticeSpec& spec = grid.spec_;
  for (std::size_t id = 0; id < grid.tags_.size(); ++id) {
    if (grid.is_evaluated(id) && !std::isfinite(grid.values_[id])) {
      const FineIndex f = spec.fine_index(id);
      throw Error(ErrorCode::MissingCoarseValue, "evaluated vertex (" + std::to_string(f.i) + "," +
                                                     std::to_string(f.j) + "," + std::to_string(f.k) +
                                                     ") has no value");
    }
  }

  const int n = spec.fine_per_axis();
  auto fill_pass = [&](FineClass cls, VertexTag tag) {
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t begin, std::size_t end) {
      for (auto i = static_cast<int>(begin); i < static_cast<int>(end); ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            const FineIndex f{i, j, k};
            if (classify_fine(f) != cls) continue;
            const std::size_t id = spec.fine_id(f);
            if (grid.tags_[id] != VertexTag::Unset) continue;
            // Neighbors one step along each odd axis belong to the previous class.
            double sum = 0.0;
            int count = 0;
            const int idx[3] = {i, j, k};
            for (int axis = 0; axis < 3; ++axis) {
              if ((idx[axis] & 1) == 0) continue;
              for (int step : {-1, 1}) {
                int g[3] = {i, j, k};
                g[axis] += step;
                if (g[axis] < 0 || g[axis] >= n) continue;
                sum += grid.values_[spec.fine_id({g[0], g[1], g[2]})];
                ++count;
              }
            }
            grid.values_[id] = sum / count;
            grid.tags_[id] = tag;
          }
        }
      }
    });
  };
  fill_pass(FineClass::EdgeMid, VertexTag::Edge);
  fill_pass(FineClass::FaceCenter, VertexTag::Face);
  fill_pass(FineClass::CellCenter, VertexTag::Cell);
}

std::vector<std::size_t> select_hot(const CurvatureField& field, double threshold) {
  std::vector<std::size_t> hot;
  for (std::size_t id = 0; id < field.sigma.size(); ++id) {
    if (field.sigma[id] && *field.sigma[id] >= threshold) hot.push_back(id);
  }
  return hot;
}

void write_dense_field(const LatticeSpec& spec, std::span<const double> values, const std::filesystem::path& path) {
  if (values.size() != spec.fine_count()) {
    throw Error(ErrorCode::InvalidInput, "field size does not match the lattice");
  }
  std::string bytes(values.size() * sizeof(float), '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto v = static_cast<float>(values[i]);
    std::memcpy(bytes.data() + i * sizeof(float), &v, sizeof(float));
  }
  write_file(path, bytes);
  const int n = spec.fine_per_axis();
  std::ostringstream header;
  header << n << ' ' << n << ' ' << n << ' ' << spec.margin_cells << '\n';
  write_file(path.string() + ".hdr", header.str());
}

DenseField read_dense_field(const std::filesystem::path& path) {
  std::istringstream header(read_file(path.string() + ".hdr"));
  int nx = 0;
  int ny = 0;
  int nz = 0;
  int margin = 0;
  if (!(header >> nx >> ny >> nz >> margin)) {
    throw Error(ErrorCode::ParseError, path.string() + ".hdr: expected 4 integers");
  }
  if (nx != ny || ny != nz || nx < 3 || (nx - 1) % 2 != 0) {
    throw Error(ErrorCode::ParseError, path.string() + ".hdr: unsupported lattice shape");
  }
  DenseField field;
  field.spec.coarse_cells = (nx - 1) / 2;
  field.spec.margin_cells = margin;
  field.spec.validate();
  const std::string bytes = read_file(path);
  if (bytes.size() != field.spec.fine_count() * sizeof(float)) {
    throw Error(ErrorCode::ParseError, path.string() + ": expected " +
                                           std::to_string(field.spec.fine_count() * sizeof(float)) + " bytes, found " +
                                           std::to_string(bytes.size()));
  }
  field.values.resize(field.spec.fine_count());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    float v;
    std::memcpy(&v, bytes.data() + i * sizeof(float), sizeof(float));
    field.values[i] = v;
  }
  return field;
}

}  // namespace adaptudf
