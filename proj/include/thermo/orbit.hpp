#pragma once

#include <array>
#include <memory>

#include "thermo/dopri5.hpp"
#include "thermo/intensity.hpp"
#include "thermo/surface.hpp"

namespace thermo {

// Chart components of the flow generator F = X + lambda V at p.
std::array<double, 3> generator(const ConformalTorus& surface, const IntensityModel& model,
                                const PhasePoint& p);

// Dense-output trajectory of the thermostat flow over [t_min, t_max] with
// t_min <= 0 <= t_max. State is (x, y, theta) unwrapped plus the running
// quadrature q(t) = int_0^t V(lambda) used by the damping factor
// m(t) = exp(-q(t)/2). Immutable and safe to share across threads.
class OrbitSegment {
 public:
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  bool covers(double t) const;

  PhasePoint initial_point() const { return v0_; }
  PhasePoint state(double t) const;                 // coordinates wrapped to [0, 2pi)
  std::array<double, 4> raw_state(double t) const;  // unwrapped (x, y, theta, q)
  double damping_m(double t) const;

  const ConformalTorus& surface() const { return *surface_; }
  const IntensityModel& model() const { return *model_; }
  const IntegratorOptions& options() const { return options_; }
  const IntegratorStats& stats() const { return stats_; }

 private:
  friend OrbitSegment integrate_orbit(const ConformalTorus&, const IntensityModel&,
                                      const PhasePoint&, double, double,
                                      const IntegratorOptions&);
  std::shared_ptr<const ConformalTorus> surface_;
  std::shared_ptr<const IntensityModel> model_;
  PhasePoint v0_;
  double t_min_ = 0.0, t_max_ = 0.0;
  DenseSolution<4> forward_, backward_;  // backward parametrized by s = -t
  IntegratorOptions options_;
  IntegratorStats stats_;
};

OrbitSegment integrate_orbit(const ConformalTorus& surface, const IntensityModel& model,
                             const PhasePoint& v0, double t_min, double t_max,
                             const IntegratorOptions& opt = {});

inline OrbitSegment integrate_orbit(const ConformalTorus& surface, const IntensityModel& model,
                                    const PhasePoint& v0, double t_max,
                                    const IntegratorOptions& opt = {}) {
  return integrate_orbit(surface, model, v0, 0.0, t_max, opt);
}

double damping_m(const OrbitSegment& orbit, double t);

// Integrates (g, lambda) forward for T, flips the endpoint velocity,
// integrates (g, flipped lambda) forward for T, flips again; returns the
// max-norm torus distance to v0.
double reverse_orbit_check(const ConformalTorus& surface, const IntensityModel& model,
                           const PhasePoint& v0, double T, const IntegratorOptions& opt = {});

// Base-point projection of the flow: pi(phi_t(x0, y0, theta0)), wrapped.
std::array<double, 2> exp_map(const ConformalTorus& surface, const IntensityModel& model,
                              double x0, double y0, double theta0, double t,
                              const IntegratorOptions& opt = {});

// Magnitude of the component of d(exp)/d(theta0) orthogonal to the orbit
// velocity, measured in the metric at the endpoint (central difference of
// step eps). Vanishes exactly at conjugate points along the orbit.
double exp_jacobian_fd(const ConformalTorus& surface, const IntensityModel& model, double x0,
                       double y0, double theta0, double t, double eps,
                       const IntegratorOptions& opt = {});

}  // namespace thermo
