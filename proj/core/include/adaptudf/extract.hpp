#pragma once

#include <span>

#include "adaptudf/grid.hpp"
#include "adaptudf/model.hpp"

namespace adaptudf {

/// Offset level of the extracted shell {x : UDF(x) = epsilon}.
struct IsoSpec {
  double epsilon = 0.0;

  /// Half of one fine cell edge, the default offset.
  static IsoSpec half_fine_cell(const LatticeSpec& spec) { return {0.5 * spec.fine_spacing()}; }
};

/// Marching cubes over the fine lattice on f(x) - epsilon, with linear
/// interpolation along cube edges. Vertices are shared between cubes (one per
/// crossed lattice edge, ordered by edge id); faces follow cube order, so the
/// output depends only on the field. Throws EmptyField when the field is
/// missing or contains non-finite values.
TriangleMesh marching_cubes(std::span<const double> field, const LatticeSpec& spec, const IsoSpec& iso,
                            unsigned workers = 1);

}  // namespace adaptudf
