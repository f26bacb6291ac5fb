#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "thermo/sigma.hpp"

namespace thermo {

enum class ConjugateDetector { Jacobi, ExpFd };

struct ConjugateReport {
  PhasePoint v0;
  std::optional<double> time;
  ConjugateDetector detector = ConjugateDetector::Jacobi;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |z| (or |normal component|) at the refined time
};

// First zero of the damped Jacobi solution with z(0) = 0, z'(0) = 1 in
// (0, T_max], located by a sign-change scan (step 0.05) and refined by
// bisection to |dt| < tol. Returns nothing when z keeps its sign.
std::optional<double> first_conjugate_time(const OrbitSegment& orbit, double T_max, double tol,
                                           const IntegratorOptions& opt = {});
std::optional<double> first_conjugate_time(const KappaProfile& profile, double T_max, double tol,
                                           const IntegratorOptions& opt = {});
ConjugateReport conjugate_report(const OrbitSegment& orbit, double T_max, double tol,
                                 const IntegratorOptions& opt = {});

// Same search on the exponential-map detector: the signed metric-normal
// component of d(exp)/d(theta0) along the orbit from v0.
std::optional<double> first_conjugate_time_expfd(const ConformalTorus& surface,
                                                 const IntensityModel& model, const PhasePoint& v0,
                                                 double T_max, double tol, double eps = 1e-4,
                                                 const IntegratorOptions& opt = {});

enum class GreenSide { Stable, Unstable };

struct GreenOptions {
  std::vector<double> t0_schedule{2.0, 4.0, 8.0, 16.0, 32.0};
  double tol = 1e-8;
  double renorm_dt = 1.0;
  IntegratorOptions transport{1e-11, 1e-13};
};

struct GreenEstimate {
  GreenSide side = GreenSide::Stable;
  GaugeSpec gauge;
  PhasePoint anchor;
  std::vector<double> t0_used;
  std::vector<double> slopes;       // slope after pulling the cohorizontal line back from +-t0
  bool conjugate_flag = false;      // a pullback landed on the cohorizontal line
  bool converged = false;
  double slope = 0.0;               // last computed slope
  double slope_zero_gauge = 0.0;    // same line in the gauge-zero basis
};

// Pullback slope of the cohorizontal line from time +t0 (stable) or -t0
// (unstable) to time 0, for each t0 in the schedule until two consecutive
// slopes differ by less than tol. The orbit must span the required side.
GreenEstimate green_slope(const OrbitSegment& orbit, GreenSide side, const GaugeSpec& gauge,
                          const GreenOptions& opt = {});

// Abstract-profile variant in z coordinates: the reported slope is the
// Riccati variable w = z'(0)/z(0) of the solution vanishing at +-t0.
GreenEstimate green_w_slope(const KappaProfile& profile, GreenSide side,
                            const GreenOptions& opt = {});

// Stable/unstable pair at an arbitrary state through a freshly integrated
// orbit spanning [-t0_max, t0_max].
std::pair<GreenEstimate, GreenEstimate> green_pair_at(const ConformalTorus& surface,
                                                      const IntensityModel& model,
                                                      const PhasePoint& state,
                                                      const GaugeSpec& gauge,
                                                      const GreenOptions& opt = {},
                                                      const IntegratorOptions& orbit_opt = {});

// Finite-time Lyapunov exponent of the lifted cocycle along xi0: averaged
// log growth of the |x| + |y| norm with renormalization every renorm_dt.
double lyapunov_exponent(const ConformalTorus& surface, const IntensityModel& model,
                         const PhasePoint& v0, const SigmaCovector& xi0, double T,
                         double renorm_dt = 1.0, const IntegratorOptions& orbit_opt = {},
                         const IntegratorOptions& transport_opt = {});
double lyapunov_exponent(const OrbitSegment& orbit, const SigmaCovector& xi0, double T,
                         double renorm_dt = 1.0, const IntegratorOptions& transport_opt = {});

// Max over sample times of |r^2 + (V(lambda) - 2p) r + kappa_p - F(r)| with
// F(r) a 4th-order central difference (step h) of the slope field evaluated
// along the orbit.
double riccati_residual(const OrbitSegment& orbit, const GaugeSpec& gauge,
                        const std::function<double(double)>& slope_at, double h,
                        std::span<const double> sample_times);

// Residual of the synthesized zero-curvature gauge p_hat = V(lambda) - r^u,
// with r^u the unstable slope field in the gauge p = V(lambda). Returns
// max |kappa_{p_hat}| over the sample times.
double synthesize_zero_gauge(const OrbitSegment& orbit,
                             const std::function<double(double)>& unstable_slope_at, double h,
                             std::span<const double> sample_times);

struct TransversalityCell {
  PhasePoint anchor;
  GreenEstimate stable;
  GreenEstimate unstable;
  double gap = 0.0;  // |r^s - r^u| (gauge independent)
  bool valid = false;
};

struct TransversalityScan {
  std::array<int, 3> grid{};
  std::vector<TransversalityCell> cells;  // x-major, then y, then theta
  double min_gap = 0.0;
  double max_gap = 0.0;
  double continuity_modulus = 0.0;  // max slope jump between neighboring cells
  int non_converged = 0;
  int conjugate_flagged = 0;
};

TransversalityScan transversality_scan(const ConformalTorus& surface, const IntensityModel& model,
                                       std::array<int, 3> grid, const GaugeSpec& gauge,
                                       const GreenOptions& opt = {},
                                       const IntegratorOptions& orbit_opt = {}, int workers = 1);

// Max over grid anchors of |kappa_w + (r^s - r^u)^2 / 4| where
// w = -(r^s + r^u)/2 in the gauge-zero basis and F(w) is finite-differenced
// along a short orbit through each anchor. green_zero returns the pair
// (r^s_0, r^u_0) at a state.
double kappa_w_identity(const ConformalTorus& surface, const IntensityModel& model,
                        std::array<int, 3> grid,
                        const std::function<std::pair<double, double>(const PhasePoint&)>& green_zero,
                        double h = 1e-3, const IntegratorOptions& orbit_opt = {}, int workers = 1);

struct DominationFit {
  double slope = 0.0;   // least-squares slope of mean log a(t)
  double offset = 0.0;
  std::vector<double> per_sample_slope;
  std::vector<std::vector<double>> log_a;  // [sample][t-1] for t = 1..T
};

// a(t) = |Psi_t xi_s| * |Psi_{-t}(phi_t v) xi_u(phi_t v)| with unit
// covectors in the computed Green lines; fits log a(t) against t.
DominationFit domination_estimate(const ConformalTorus& surface, const IntensityModel& model,
                                  std::span<const PhasePoint> samples, int T,
                                  const GaugeSpec& gauge, const GreenOptions& opt = {},
                                  const IntegratorOptions& orbit_opt = {}, int workers = 1);

}  // namespace thermo
