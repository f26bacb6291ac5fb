#include "thermo/intensity.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace thermo {

IntensityModel IntensityModel::constant(double c) {
  IntensityModel m(0);
  FourierField2 f;
  f.set_coefficient(0, 0, TrigBasis::CosCos, c);
  m.set_cos_field(0, std::move(f));
  return m;
}

IntensityModel IntensityModel::cos_theta(int k, double amplitude) {
  IntensityModel m(k);
  FourierField2 f;
  f.set_coefficient(0, 0, TrigBasis::CosCos, amplitude);
  m.set_cos_field(k, std::move(f));
  return m;
}

IntensityModel IntensityModel::sin_theta(int k, double amplitude) {
  IntensityModel m(k);
  FourierField2 f;
  f.set_coefficient(0, 0, TrigBasis::CosCos, amplitude);
  m.set_sin_field(k, std::move(f));
  return m;
}

void IntensityModel::set_theta_degree(int K) {
  if (K < 0 || K > FourierField2::kMaxDegree)
    throw std::invalid_argument("theta degree out of range [0, 32]");
  a_.assign(static_cast<std::size_t>(K) + 1, FourierField2{});
  b_.assign(static_cast<std::size_t>(K) + 1, FourierField2{});
  finalize();
}

void IntensityModel::set_cos_field(int k, FourierField2 field) {
  if (k < 0 || k > theta_degree()) throw std::invalid_argument("cos mode index out of range");
  a_[static_cast<std::size_t>(k)] = std::move(field);
  finalize();
}

void IntensityModel::set_sin_field(int k, FourierField2 field) {
  if (k < 0 || k > theta_degree()) throw std::invalid_argument("sin mode index out of range");
  b_[static_cast<std::size_t>(k)] = std::move(field);
  finalize();
}

void IntensityModel::finalize() {
  const std::size_t n = a_.size();
  ax_.resize(n);
  ay_.resize(n);
  bx_.resize(n);
  by_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ax_[k] = a_[k].derivative_x();
    ay_[k] = a_[k].derivative_y();
    bx_[k] = b_[k].derivative_x();
    by_[k] = b_[k].derivative_y();
  }
}

bool IntensityModel::is_zero() const {
  for (const auto& f : a_)
    if (!f.is_zero()) return false;
  for (const auto& f : b_)
    if (!f.is_zero()) return false;
  return true;
}

bool IntensityModel::is_magnetic() const {
  // b_0 multiplies sin(0) and never contributes.
  for (std::size_t k = 1; k < a_.size(); ++k)
    if (!a_[k].is_zero() || !b_[k].is_zero()) return false;
  return true;
}

int IntensityModel::max_spatial_degree_x() const {
  int d = 0;
  for (const auto& f : a_) d = std::max(d, f.degree_x());
  for (const auto& f : b_) d = std::max(d, f.degree_x());
  return d;
}

int IntensityModel::max_spatial_degree_y() const {
  int d = 0;
  for (const auto& f : a_) d = std::max(d, f.degree_y());
  for (const auto& f : b_) d = std::max(d, f.degree_y());
  return d;
}

namespace {

// Fiber trig recurrence shared by the pointwise evaluators.
struct ThetaIter {
  double c1, s1, ck, sk, ckm, skm;
  explicit ThetaIter(double theta)
      : c1(std::cos(theta)), s1(std::sin(theta)), ck(1.0), sk(0.0), ckm(0.0), skm(0.0) {}
  // advance from mode k-1 to mode k (call with k >= 1)
  void advance(int k) {
    if (k == 1) {
      ckm = ck;
      skm = sk;
      ck = c1;
      sk = s1;
      return;
    }
    const double cn = 2.0 * c1 * ck - ckm;
    const double sn = 2.0 * c1 * sk - skm;
    ckm = ck;
    skm = sk;
    ck = cn;
    sk = sn;
  }
};

}  // namespace

double IntensityModel::lambda(const PhasePoint& p) const {
  double lam = 0.0, vlam = 0.0;
  lambda_and_v(p, lam, vlam);
  return lam;
}

double IntensityModel::v_lambda(const PhasePoint& p) const {
  double lam = 0.0, vlam = 0.0;
  lambda_and_v(p, lam, vlam);
  return vlam;
}

void IntensityModel::lambda_and_v(const PhasePoint& p, double& lam, double& vlam) const {
  ThetaIter it(p.theta);
  lam = 0.0;
  vlam = 0.0;
  const int K = theta_degree();
  for (int k = 0; k <= K; ++k) {
    if (k > 0) it.advance(k);
    const double av = a_[static_cast<std::size_t>(k)](p.x, p.y);
    const double bv = b_[static_cast<std::size_t>(k)](p.x, p.y);
    lam += av * it.ck + bv * it.sk;
    vlam += static_cast<double>(k) * (-av * it.sk + bv * it.ck);
  }
}

LambdaJet IntensityModel::jet(const ConformalTorus& surface, const PhasePoint& p) const {
  ThetaIter it(p.theta);
  double lam = 0.0, lam_t = 0.0, lam_tt = 0.0;
  double lam_x = 0.0, lam_y = 0.0, lam_tx = 0.0, lam_ty = 0.0;
  const int K = theta_degree();
  for (int k = 0; k <= K; ++k) {
    if (k > 0) it.advance(k);
    const double kk = static_cast<double>(k);
    const std::size_t ki = static_cast<std::size_t>(k);
    const double av = a_[ki](p.x, p.y);
    const double bv = b_[ki](p.x, p.y);
    const double axv = ax_[ki](p.x, p.y);
    const double ayv = ay_[ki](p.x, p.y);
    const double bxv = bx_[ki](p.x, p.y);
    const double byv = by_[ki](p.x, p.y);
    lam += av * it.ck + bv * it.sk;
    lam_t += kk * (-av * it.sk + bv * it.ck);
    lam_tt += -kk * kk * (av * it.ck + bv * it.sk);
    lam_x += axv * it.ck + bxv * it.sk;
    lam_y += ayv * it.ck + byv * it.sk;
    lam_tx += kk * (-axv * it.sk + bxv * it.ck);
    lam_ty += kk * (-ayv * it.sk + byv * it.ck);
  }

  const double cf = std::exp(-surface.f()(p.x, p.y));
  const double fx = surface.f_x()(p.x, p.y);
  const double fy = surface.f_y()(p.x, p.y);
  const double c = it.c1;
  const double s = it.s1;
  const double xtheta = -fx * s + fy * c;  // theta component of X over cf

  LambdaJet j;
  j.lambda = lam;
  j.v_lambda = lam_t;
  j.vv_lambda = lam_tt;
  j.lambda_x = lam_x;
  j.lambda_y = lam_y;
  j.x_lambda = cf * (c * lam_x + s * lam_y + xtheta * lam_t);
  j.h_lambda = cf * (-s * lam_x + c * lam_y - (fx * c + fy * s) * lam_t);
  j.f_lambda = j.x_lambda + lam * lam_t;
  const double x_v_lambda = cf * (c * lam_tx + s * lam_ty + xtheta * lam_tt);
  j.f_v_lambda = x_v_lambda + lam * lam_tt;
  return j;
}

IntensityModel IntensityModel::flipped() const {
  IntensityModel m(theta_degree());
  for (int k = 0; k <= theta_degree(); ++k) {
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // -(-1)^k
    m.set_cos_field(k, a_[static_cast<std::size_t>(k)].scaled(sign));
    m.set_sin_field(k, b_[static_cast<std::size_t>(k)].scaled(sign));
  }
  return m;
}

IntensityModel flip_intensity(const IntensityModel& model) { return model.flipped(); }

GaugeSpec GaugeSpec::zero() {
  GaugeSpec g;
  g.kind_ = Kind::Zero;
  g.factor_ = 0.0;
  return g;
}

GaugeSpec GaugeSpec::scaled_v_lambda(double factor) {
  GaugeSpec g;
  g.kind_ = Kind::ScaledVLambda;
  g.factor_ = factor;
  return g;
}

GaugeSpec GaugeSpec::custom(IntensityModel p) {
  GaugeSpec g;
  g.kind_ = Kind::Custom;
  g.custom_ = std::make_shared<const IntensityModel>(std::move(p));
  return g;
}

bool GaugeSpec::same_as(const GaugeSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::ScaledVLambda) return factor_ == other.factor_;
  if (kind_ == Kind::Custom) return custom_ == other.custom_;
  return true;
}

std::string GaugeSpec::label() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::ScaledVLambda: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "scaled_v_lambda:%.17g", factor_);
      return buf;
    }
    case Kind::Custom: return "custom";
  }
  return "?";
}

double GaugeSpec::p(const ConformalTorus& surface, const IntensityModel& model,
                    const PhasePoint& pt) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::ScaledVLambda: return factor_ * model.v_lambda(pt);
    case Kind::Custom: return custom_->lambda(pt);
  }
  (void)surface;
  return 0.0;
}

std::pair<double, double> GaugeSpec::p_and_f_p(const ConformalTorus& surface,
                                               const IntensityModel& model, const PhasePoint& pt,
                                               const LambdaJet& jet) const {
  switch (kind_) {
    case Kind::Zero: return {0.0, 0.0};
    case Kind::ScaledVLambda: return {factor_ * jet.v_lambda, factor_ * jet.f_v_lambda};
    case Kind::Custom: {
      const LambdaJet pj = custom_->jet(surface, pt);
      // F(p) = X(p) + lambda V(p), with lambda the flow's intensity.
      return {pj.lambda, pj.x_lambda + jet.lambda * pj.v_lambda};
    }
  }
  (void)model;
  return {0.0, 0.0};
}

double kappa_p(const ConformalTorus& surface, const IntensityModel& model, const GaugeSpec& gauge,
               const PhasePoint& p, const LambdaJet& jet) {
  const double kg = surface.gaussian_curvature(p.x, p.y);
  const auto [pv, fp] = gauge.p_and_f_p(surface, model, p, jet);
  return kg - jet.h_lambda + jet.lambda * jet.lambda + fp + pv * (pv - jet.v_lambda);
}

double kappa_p(const ConformalTorus& surface, const IntensityModel& model, const GaugeSpec& gauge,
               const PhasePoint& p) {
  return kappa_p(surface, model, gauge, p, model.jet(surface, p));
}

double big_k(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& p) {
  return kappa_p(surface, model, GaugeSpec::scaled_v_lambda(1.0), p);
}

double kappa_tilde(const ConformalTorus& surface, const IntensityModel& model, const PhasePoint& p,
                   const LambdaJet& jet) {
  return kappa_p(surface, model, GaugeSpec::scaled_v_lambda(0.5), p, jet);
}

double kappa_tilde(const ConformalTorus& surface, const IntensityModel& model,
                   const PhasePoint& p) {
  return kappa_tilde(surface, model, p, model.jet(surface, p));
}

GaugeCurvatures gauge_curvatures(const ConformalTorus& surface, const IntensityModel& model,
                                 const GaugeSpec& gauge, const PhasePoint& p) {
  const LambdaJet jet = model.jet(surface, p);
  GaugeCurvatures out;
  out.kappa_p = kappa_p(surface, model, gauge, p, jet);
  out.big_k = kappa_p(surface, model, GaugeSpec::scaled_v_lambda(1.0), p, jet);
  out.kappa_tilde = kappa_p(surface, model, GaugeSpec::scaled_v_lambda(0.5), p, jet);
  return out;
}

}  // namespace thermo
