#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thermo/fourier.hpp"
#include "thermo/surface.hpp"

namespace thermo {

// Derivatives of the intensity at a phase point: fiber derivatives V, V^2,
// frame derivatives H and X, and the along-flow combinations F = X + lambda V.
struct LambdaJet {
  double lambda = 0.0;
  double v_lambda = 0.0;    // d/dtheta
  double vv_lambda = 0.0;   // d^2/dtheta^2
  double h_lambda = 0.0;    // H(lambda)
  double x_lambda = 0.0;    // X(lambda)
  double f_lambda = 0.0;    // F(lambda) = X(lambda) + lambda V(lambda)
  double f_v_lambda = 0.0;  // F(V(lambda)) = X(V(lambda)) + lambda V^2(lambda)
  double lambda_x = 0.0;    // chart partials, exposed for custom gauges
  double lambda_y = 0.0;
};

// Intensity lambda(x, y, theta) = sum_k a_k(x,y) cos(k theta) + b_k(x,y) sin(k theta)
// with trigonometric-polynomial spatial coefficients. All derivatives used in
// the curvature gauges are exact. Immutable after construction.
class IntensityModel {
 public:
  IntensityModel() { set_theta_degree(0); }
  explicit IntensityModel(int theta_degree) { set_theta_degree(theta_degree); }

  static IntensityModel zero() { return IntensityModel{}; }
  // lambda = c (magnetic intensity)
  static IntensityModel constant(double c);
  // lambda = cos(k theta) or sin(k theta) with unit coefficient
  static IntensityModel cos_theta(int k, double amplitude = 1.0);
  static IntensityModel sin_theta(int k, double amplitude = 1.0);

  void set_theta_degree(int K);
  int theta_degree() const { return static_cast<int>(a_.size()) - 1; }

  void set_cos_field(int k, FourierField2 field);
  void set_sin_field(int k, FourierField2 field);
  const FourierField2& cos_field(int k) const { return a_[static_cast<std::size_t>(k)]; }
  const FourierField2& sin_field(int k) const { return b_[static_cast<std::size_t>(k)]; }
  const FourierField2& cos_field_dx(int k) const { return ax_[static_cast<std::size_t>(k)]; }
  const FourierField2& cos_field_dy(int k) const { return ay_[static_cast<std::size_t>(k)]; }
  const FourierField2& sin_field_dx(int k) const { return bx_[static_cast<std::size_t>(k)]; }
  const FourierField2& sin_field_dy(int k) const { return by_[static_cast<std::size_t>(k)]; }

  // Bakes the precomputed spatial partials; called automatically by the
  // setters, cheap to call again.
  void finalize();

  bool is_zero() const;
  bool is_magnetic() const;  // no theta dependence

  double lambda(const PhasePoint& p) const;
  double v_lambda(const PhasePoint& p) const;
  // lambda and V(lambda) in one pass (flow generator hot path).
  void lambda_and_v(const PhasePoint& p, double& lam, double& vlam) const;

  LambdaJet jet(const ConformalTorus& surface, const PhasePoint& p) const;

  // Intensity of the time-reversed thermostat: -lambda(x, y, theta + pi),
  // i.e. coefficients a_k -> -(-1)^k a_k, b_k -> -(-1)^k b_k.
  IntensityModel flipped() const;

  int max_spatial_degree_x() const;
  int max_spatial_degree_y() const;

 private:
  std::vector<FourierField2> a_, b_;          // cos / sin coefficient fields
  std::vector<FourierField2> ax_, ay_, bx_, by_;  // exact partials
};

// Gauge p: SM -> R selecting the basis {beta, phi_p} of the characteristic
// set. Zero and c*V(lambda) cover the curvature gauges; Custom supplies an
// arbitrary intensity-shaped function.
class GaugeSpec {
 public:
  enum class Kind { Zero, ScaledVLambda, Custom };

  GaugeSpec() : kind_(Kind::ScaledVLambda), factor_(1.0) {}

  static GaugeSpec zero();
  static GaugeSpec scaled_v_lambda(double factor);
  static GaugeSpec custom(IntensityModel p);

  Kind kind() const { return kind_; }
  double factor() const { return factor_; }
  const IntensityModel* custom_model() const { return custom_.get(); }

  bool same_as(const GaugeSpec& other) const;
  std::string label() const;

  double p(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& pt) const;
  // Returns (p, F(p)) given the already-computed jet of the main intensity.
  // For ScaledVLambda(c), F(p) = c * F(V(lambda)) in closed form.
  std::pair<double, double> p_and_f_p(const ConformalTorus& surface, const IntensityModel& model,
                                      const PhasePoint& pt, const LambdaJet& jet) const;

 private:
  Kind kind_;
  double factor_ = 0.0;
  std::shared_ptr<const IntensityModel> custom_;
};

struct GaugeCurvatures {
  double kappa_p = 0.0;
  double big_k = 0.0;
  double kappa_tilde = 0.0;
};

// kappa_p = K_g - H(lambda) + lambda^2 + F(p) + p (p - V(lambda))
double kappa_p(const ConformalTorus& surface, const IntensityModel& model, const GaugeSpec& gauge,
               const PhasePoint& p);
double kappa_p(const ConformalTorus& surface, const IntensityModel& model, const GaugeSpec& gauge,
               const PhasePoint& p, const LambdaJet& jet);

// Thermostat curvature (gauge p = V(lambda)) and damped thermostat curvature
// (gauge p = V(lambda)/2); both are kappa_p with the corresponding gauge.
double big_k(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& p);
double kappa_tilde(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& p);
double kappa_tilde(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& p,
                   const LambdaJet& jet);

GaugeCurvatures gauge_curvatures(const ConformalTorus& surface, const IntensityModel& model,
                                 const GaugeSpec& gauge, const PhasePoint& p);

IntensityModel flip_intensity(const IntensityModel& model);

}  // namespace thermo
