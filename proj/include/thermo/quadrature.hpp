#pragma once

#include <array>
#include <functional>
#include <string>

#include "thermo/intensity.hpp"
#include "thermo/orbit.hpp"

namespace thermo {

// Liouville integral of an observable over the unit tangent bundle: product
// trapezoidal rule (spectrally accurate on the periodic grid) of
// observable * e^{2f} over a uniform n_x x n_y x n_theta grid. Summation is
// pairwise in a fixed order, so the result is independent of the worker
// count.
double liouville_integrate(const ConformalTorus& surface,
                           const std::function<double(const PhasePoint&)>& observable, int n_x,
                           int n_y, int n_theta, int workers = 1);

struct HopfReport {
  std::string gauge_label;
  double kappa_integral = 0.0;      // int kappa_p dmu
  double gauge_integral = 0.0;      // int (p - V(lambda))^2 dmu
  double margin = 0.0;              // gauge_integral - kappa_integral
  double euler_term = 0.0;          // 2 pi chi(T^2) + int (lambda^2 - V(lambda)^2) dmu, chi = 0
  std::array<int, 3> grid{};
};

// Evaluates the total-curvature inequality data for the given gauge. The
// batch path is used, so repeated runs and different worker counts produce
// identical bits.
HopfReport hopf_check(const ConformalTorus& surface, const IntensityModel& model,
                      const GaugeSpec& gauge, std::array<int, 3> grid, int workers = 1);

// Finite-difference Jacobian of the time-t flow map over a small cube,
// weighted by the Liouville density ratio; equals 1 for volume-preserving
// (magnetic) intensities.
double mu_volume_distortion(const ConformalTorus& surface, const IntensityModel& model,
                            const PhasePoint& v0, double t, double h,
                            const IntegratorOptions& opt = {});

}  // namespace thermo
