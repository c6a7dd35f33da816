#pragma once

#include "adaptudf/curvature.hpp"

namespace adaptudf {

/// Five-phase curvature-to-radius schedule. Below sigma10 the support radius
/// is dilated by s_max; between sigma10 and sigma40 it relaxes back to the
/// nominal radius along a power-alpha ramp; it stays nominal up to sigma60;
/// it tapers along a power-beta ramp to s_min at sigma90 and stays there.
struct RadiusSchedule {
  double sigma10 = 0.0;
  double sigma40 = 0.0;
  double sigma60 = 0.0;
  double sigma90 = 0.0;
  double s_max = 1.35;
  double s_min = 2.0 / 3.0;
  double alpha = 0.5;
  double beta = 1.5;
  double r0 = 0.018;

  /// Throws InvalidConfig unless breakpoints are ordered, s_min < 1 < s_max
  /// and alpha, beta, r0 are positive.
  void validate() const;

  static RadiusSchedule from_percentiles(const CurvaturePercentiles& p) {
    RadiusSchedule s;
    s.sigma10 = p.p10;
    s.sigma40 = p.p40;
    s.sigma60 = p.p60;
    s.sigma90 = p.p90;
    return s;
  }
};

double scale_factor(const RadiusSchedule& schedule, double sigma);

inline double radius(const RadiusSchedule& schedule, double sigma) {
  return schedule.r0 * scale_factor(schedule, sigma);
}

}  // namespace adaptudf
