#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "thermo/orbit.hpp"

namespace thermo {

// Covector in the characteristic set, written in the basis {beta, phi_p}
// with phi_p = psi_lambda - p beta for the gauge p. The y component (the
// psi_lambda part) is basis independent; slopes transform as
// s_{p'} = s_p + (p' - p) at the anchor state.
struct SigmaCovector {
  GaugeSpec gauge;
  double x_c = 0.0;
  double y_c = 0.0;
  double anchor_time = 0.0;
};

// Projective line in the characteristic set: slope x_c / y_c, infinite
// exactly on the cohorizontal line (y_c = 0).
struct SigmaLine {
  GaugeSpec gauge;
  double slope = 0.0;
  bool infinite = false;

  static SigmaLine from_components(const GaugeSpec& gauge, double x_c, double y_c);
};

// Exact basis-change rule for slopes.
inline double rebase_slope(double slope, double p_old, double p_new) {
  return slope + (p_new - p_old);
}

// Rewrites a covector in another gauge basis at its anchor state.
SigmaCovector rebase_covector(const OrbitSegment& orbit, const SigmaCovector& xi,
                              const GaugeSpec& new_gauge);

// Coefficients of the lifted linear system at a point of the orbit.
struct SigmaCoeffs {
  double p = 0.0;
  double kappa_p = 0.0;
  double v_lambda = 0.0;
};
SigmaCoeffs sigma_coeffs(const OrbitSegment& orbit, const GaugeSpec& gauge, double t);

// Solves x' = -p x + kappa_p y, y' = -x - (V(lambda) - p) y along the orbit
// from the covector's anchor time to t (forward or backward within the
// span). The gauge argument must match the covector's basis tag.
SigmaCovector propagate_sigma(const OrbitSegment& orbit, const GaugeSpec& gauge,
                              const SigmaCovector& xi0, double t,
                              const IntegratorOptions& opt = {});

// Dense version over [from, to]; eval returns (x_c, y_c).
class SigmaSolution {
 public:
  double t_from() const { return t_from_; }
  double t_to() const { return t_to_; }
  std::array<double, 2> eval(double t) const;

  DenseSolution<2> dense_;
  double t_from_ = 0.0, t_to_ = 0.0, direction_ = 1.0;
};
SigmaSolution propagate_sigma_dense(const OrbitSegment& orbit, const GaugeSpec& gauge,
                                    const SigmaCovector& xi0, double t,
                                    const IntegratorOptions& opt = {});

// Damped curvature profile along an abstract (surface-free) orbit.
using KappaProfile = std::function<double(double)>;

// Damped Jacobi equation z'' + kappa_tilde z = 0 along the orbit (or an
// abstract profile). Returns (z, z') at t.
std::pair<double, double> propagate_z(const OrbitSegment& orbit, double z0, double zdot0, double t,
                                      const IntegratorOptions& opt = {});
std::pair<double, double> propagate_z(const KappaProfile& profile, double z0, double zdot0,
                                      double t, const IntegratorOptions& opt = {});

// Dense (z, z') solution over [0, t] (t may be negative).
class ZSolution {
 public:
  double t_to() const { return t_to_; }
  std::array<double, 2> eval(double t) const;

  DenseSolution<2> dense_;
  double t_to_ = 0.0, direction_ = 1.0;
};
ZSolution propagate_z_dense(const OrbitSegment& orbit, double z0, double zdot0, double t,
                            const IntegratorOptions& opt = {});
ZSolution propagate_z_dense(const KappaProfile& profile, double z0, double zdot0, double t,
                            const IntegratorOptions& opt = {});

// 2x2 cocycle matrix over the flow: columns are the propagated basis
// covectors. Flavor Gamma divides out the damping factor and requires the
// gauge p = V(lambda)/2; it is unimodular.
struct CocycleMatrix {
  enum class Flavor { Psi, Gamma };
  double a = 1.0, b = 0.0;  // [[a, b], [c, d]]
  double c = 0.0, d = 1.0;
  double t = 0.0;
  GaugeSpec gauge;
  Flavor flavor = Flavor::Psi;

  double det() const { return a * d - b * c; }
  std::array<double, 2> apply(double x, double y) const { return {a * x + b * y, c * x + d * y}; }
};

CocycleMatrix cocycle_matrix(const OrbitSegment& orbit, const GaugeSpec& gauge, double t,
                             CocycleMatrix::Flavor flavor, const IntegratorOptions& opt = {});

// Fundamental matrix from time t0 to t1 along the orbit (flavor Psi).
CocycleMatrix cocycle_matrix_between(const OrbitSegment& orbit, const GaugeSpec& gauge, double t0,
                                     double t1, const IntegratorOptions& opt = {});

// Riccati equation w' + w^2 + kappa_tilde = 0 with finite-time blow-up
// detection: integration stops once |w| exceeds cap and the crossing time
// is reported. Blow-up is data, not an error.
struct RiccatiResult {
  std::vector<std::pair<double, double>> samples;  // (t, w)
  std::optional<double> blow_up_time;
};
RiccatiResult riccati_w(const OrbitSegment& orbit, double w0, double t_end, double cap = 1e6,
                        double sample_dt = 0.05, const IntegratorOptions& opt = {});
RiccatiResult riccati_w(const KappaProfile& profile, double w0, double t_end, double cap = 1e6,
                        double sample_dt = 0.05, const IntegratorOptions& opt = {});

// Transports a covector between times in renormalized chunks, accumulating
// the log of the |x| + |y| norm growth. Used by Lyapunov estimates, Green
// transports and domination products.
struct TransportResult {
  double x_c = 0.0;
  double y_c = 0.0;
  double log_growth = 0.0;  // log(norm(end) / norm(start))
};
TransportResult transport_renormalized(const OrbitSegment& orbit, const GaugeSpec& gauge,
                                       double x_c, double y_c, double t_from, double t_to,
                                       double renorm_dt, const IntegratorOptions& opt = {});

}  // namespace thermo
