#include "adaptudf/schedule.hpp"

#include <cmath>

#include "adaptudf/error.hpp"

namespace adaptudf {
namespace {

// Normalized position of sigma on [lo, hi]. A collapsed interval acts as a
// step located at the shared breakpoint.
double ramp(double sigma, double lo, double hi) {
  if (hi > lo) return (sigma - lo) / (hi - lo);
  return sigma >= hi ? 1.0 : 0.0;
}

}  // namespace

void RadiusSchedule::validate() const {
  if (!(sigma10 <= sigma40 && sigma40 <= sigma60 && sigma60 <= sigma90)) {
    throw Error(ErrorCode::InvalidConfig, "curvature breakpoints must be non-decreasing");
  }
  if (!(s_min < 1.0 && 1.0 < s_max)) throw Error(ErrorCode::InvalidConfig, "need s_min < 1 < s_max");
  if (!(s_min > 0.0)) throw Error(ErrorCode::InvalidConfig, "s_min must be positive");
  if (!(alpha > 0.0 && beta > 0.0 && r0 > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "alpha, beta and r0 must be positive");
  }
}

double scale_factor(const RadiusSchedule& s, double sigma) {
  if (sigma <= s.sigma10) return s.s_max;
  if (sigma < s.sigma40) {
    const double g1 = std::pow(ramp(sigma, s.sigma10, s.sigma40), s.alpha);
    return (1.0 - g1) * s.s_max + g1;
  }
  if (sigma < s.sigma60) return 1.0;
  if (sigma < s.sigma90) {
    const double g2 = std::pow(ramp(sigma, s.sigma60, s.sigma90), s.beta);
    return 1.0 - (1.0 - s.s_min) * g2;
  }
  return s.s_min;
}

}  // namespace adaptudf
