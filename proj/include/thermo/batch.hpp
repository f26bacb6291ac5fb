#pragma once

#include <span>
#include <vector>

#include "thermo/intensity.hpp"
#include "thermo/surface.hpp"

namespace thermo {

// Kernel-backed evaluation of the curvature gauges and Hopf integrands over
// arrays of phase points. Produces the same values as the pointwise
// evaluators; grid scans and quadrature use this path. Not thread-safe per
// instance (owns scratch buffers); create one per worker or per call.
class SurfaceModelBatch {
 public:
  SurfaceModelBatch(const ConformalTorus& surface, const IntensityModel& model);

  // kappa_p in the given gauge plus the two fixed gauges. Output spans may
  // be empty to skip a quantity.
  void curvatures(const GaugeSpec& gauge, std::span<const double> x, std::span<const double> y,
                  std::span<const double> theta, std::span<double> kappa_p,
                  std::span<double> big_k, std::span<double> kappa_tilde);

  // Products with the Liouville weight e^{2f}: kappa_p * w, (p - V(lambda))^2 * w,
  // (lambda^2 - V(lambda)^2) * w, and the weight itself.
  void hopf_integrands(const GaugeSpec& gauge, std::span<const double> x,
                       std::span<const double> y, std::span<const double> theta,
                       std::span<double> kappa_p_w, std::span<double> gauge_term_w,
                       std::span<double> magnetic_term_w, std::span<double> weight);

 private:
  struct ModelJets {
    std::vector<double> lam, lam_t, lam_tt, lam_x, lam_y, lam_tx, lam_ty;
    void resize(std::size_t n);
  };

  void eval_chunk(const GaugeSpec& gauge, std::span<const double> x, std::span<const double> y,
                  std::span<const double> theta, bool want_weight);
  void model_jets(const IntensityModel& m, std::size_t n, ModelJets& out);

  const ConformalTorus* surface_;
  const IntensityModel* model_;
  int deg_x_, deg_y_;

  // chunk scratch
  std::vector<double> cjx_, sjx_, cky_, sky_, cth_, sth_;
  std::vector<double> fld_a_, fld_b_;  // per-k contraction buffers (k-major)
  std::vector<double> f_, fx_, fy_, fxx_, fyy_;
  ModelJets lamj_, pj_;
  std::vector<double> cf_, kg_, hl_, fvl_, base_;
  std::vector<double> kp_, bigk_, ktilde_, weight_;
};

}  // namespace thermo
