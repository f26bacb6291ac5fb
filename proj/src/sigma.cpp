#include "thermo/sigma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace thermo {

SigmaLine SigmaLine::from_components(const GaugeSpec& gauge, double x_c, double y_c) {
  SigmaLine line;
  line.gauge = gauge;
  const double scale = std::abs(x_c) + std::abs(y_c);
  if (scale == 0.0) throw std::invalid_argument("SigmaLine: zero covector spans no line");
  if (std::abs(y_c) <= 1e-14 * scale) {
    line.infinite = true;
    line.slope = std::numeric_limits<double>::infinity();
  } else {
    line.slope = x_c / y_c;
  }
  return line;
}

SigmaCovector rebase_covector(const OrbitSegment& orbit, const SigmaCovector& xi,
                              const GaugeSpec& new_gauge) {
  const PhasePoint at = orbit.state(xi.anchor_time);
  const double p_old = xi.gauge.p(orbit.surface(), orbit.model(), at);
  const double p_new = new_gauge.p(orbit.surface(), orbit.model(), at);
  SigmaCovector out;
  out.gauge = new_gauge;
  out.anchor_time = xi.anchor_time;
  out.y_c = xi.y_c;                                // psi_lambda component is shared
  out.x_c = xi.x_c + (p_new - p_old) * xi.y_c;
  return out;
}

SigmaCoeffs sigma_coeffs(const OrbitSegment& orbit, const GaugeSpec& gauge, double t) {
  const PhasePoint at = orbit.state(t);
  const LambdaJet jet = orbit.model().jet(orbit.surface(), at);
  SigmaCoeffs c;
  const auto [pv, fp] = gauge.p_and_f_p(orbit.surface(), orbit.model(), at, jet);
  const double kg = orbit.surface().gaussian_curvature(at.x, at.y);
  c.p = pv;
  c.kappa_p = kg - jet.h_lambda + jet.lambda * jet.lambda + fp + pv * (pv - jet.v_lambda);
  c.v_lambda = jet.v_lambda;
  return c;
}

namespace {

void require_span(const OrbitSegment& orbit, double t, const char* who) {
  if (!orbit.covers(t)) throw std::out_of_range(std::string(who) + ": time outside the orbit span");
}

struct SigmaRhs {
  const OrbitSegment* orbit;
  const GaugeSpec* gauge;
  double t_from;
  double direction;

  void operator()(double s, const std::array<double, 2>& v, std::array<double, 2>& dv) const {
    const SigmaCoeffs c = sigma_coeffs(*orbit, *gauge, t_from + direction * s);
    dv[0] = direction * (-c.p * v[0] + c.kappa_p * v[1]);
    dv[1] = direction * (-v[0] - (c.v_lambda - c.p) * v[1]);
  }
};

struct ZRhsOrbit {
  const OrbitSegment* orbit;
  double direction;

  void operator()(double s, const std::array<double, 2>& v, std::array<double, 2>& dv) const {
    const double t = direction * s;
    const PhasePoint at = orbit->state(t);
    const double kt = kappa_tilde(orbit->surface(), orbit->model(), at);
    dv[0] = direction * v[1];
    dv[1] = direction * (-kt * v[0]);
  }
};

struct ZRhsProfile {
  const KappaProfile* profile;
  double direction;

  void operator()(double s, const std::array<double, 2>& v, std::array<double, 2>& dv) const {
    const double kt = (*profile)(direction * s);
    dv[0] = direction * v[1];
    dv[1] = direction * (-kt * v[0]);
  }
};

}  // namespace

SigmaCovector propagate_sigma(const OrbitSegment& orbit, const GaugeSpec& gauge,
                              const SigmaCovector& xi0, double t, const IntegratorOptions& opt) {
  if (!gauge.same_as(xi0.gauge))
    throw std::invalid_argument("propagate_sigma: covector basis does not match the gauge");
  require_span(orbit, xi0.anchor_time, "propagate_sigma");
  require_span(orbit, t, "propagate_sigma");
  SigmaCovector out = xi0;
  out.anchor_time = t;
  if (t == xi0.anchor_time || (xi0.x_c == 0.0 && xi0.y_c == 0.0)) return out;
  const double dir = t > xi0.anchor_time ? 1.0 : -1.0;
  SigmaRhs rhs{&orbit, &gauge, xi0.anchor_time, dir};
  auto sol = integrate_dense<2>(rhs, {xi0.x_c, xi0.y_c}, std::abs(t - xi0.anchor_time), opt,
                                /*store_dense=*/false);
  const auto end = sol.endpoint();
  out.x_c = end[0];
  out.y_c = end[1];
  return out;
}

std::array<double, 2> SigmaSolution::eval(double t) const {
  return dense_.eval(direction_ * (t - t_from_));
}

SigmaSolution propagate_sigma_dense(const OrbitSegment& orbit, const GaugeSpec& gauge,
                                    const SigmaCovector& xi0, double t,
                                    const IntegratorOptions& opt) {
  if (!gauge.same_as(xi0.gauge))
    throw std::invalid_argument("propagate_sigma_dense: covector basis does not match the gauge");
  require_span(orbit, xi0.anchor_time, "propagate_sigma_dense");
  require_span(orbit, t, "propagate_sigma_dense");
  if (t == xi0.anchor_time)
    throw std::invalid_argument("propagate_sigma_dense: empty time interval");
  SigmaSolution s;
  s.t_from_ = xi0.anchor_time;
  s.t_to_ = t;
  s.direction_ = t > xi0.anchor_time ? 1.0 : -1.0;
  SigmaRhs rhs{&orbit, &gauge, xi0.anchor_time, s.direction_};
  s.dense_ = integrate_dense<2>(rhs, {xi0.x_c, xi0.y_c}, std::abs(t - xi0.anchor_time), opt);
  return s;
}

std::array<double, 2> ZSolution::eval(double t) const { return dense_.eval(direction_ * t); }

ZSolution propagate_z_dense(const OrbitSegment& orbit, double z0, double zdot0, double t,
                            const IntegratorOptions& opt) {
  require_span(orbit, t, "propagate_z");
  if (t == 0.0) throw std::invalid_argument("propagate_z: empty time interval");
  ZSolution s;
  s.t_to_ = t;
  s.direction_ = t > 0.0 ? 1.0 : -1.0;
  ZRhsOrbit rhs{&orbit, s.direction_};
  s.dense_ = integrate_dense<2>(rhs, {z0, zdot0}, std::abs(t), opt);
  return s;
}

ZSolution propagate_z_dense(const KappaProfile& profile, double z0, double zdot0, double t,
                            const IntegratorOptions& opt) {
  if (t == 0.0) throw std::invalid_argument("propagate_z: empty time interval");
  ZSolution s;
  s.t_to_ = t;
  s.direction_ = t > 0.0 ? 1.0 : -1.0;
  ZRhsProfile rhs{&profile, s.direction_};
  s.dense_ = integrate_dense<2>(rhs, {z0, zdot0}, std::abs(t), opt);
  return s;
}

std::pair<double, double> propagate_z(const OrbitSegment& orbit, double z0, double zdot0, double t,
                                      const IntegratorOptions& opt) {
  if (t == 0.0) return {z0, zdot0};
  const auto end = propagate_z_dense(orbit, z0, zdot0, t, opt).dense_.endpoint();
  return {end[0], end[1]};
}

std::pair<double, double> propagate_z(const KappaProfile& profile, double z0, double zdot0,
                                      double t, const IntegratorOptions& opt) {
  if (t == 0.0) return {z0, zdot0};
  const auto end = propagate_z_dense(profile, z0, zdot0, t, opt).dense_.endpoint();
  return {end[0], end[1]};
}

CocycleMatrix cocycle_matrix_between(const OrbitSegment& orbit, const GaugeSpec& gauge, double t0,
                                     double t1, const IntegratorOptions& opt) {
  require_span(orbit, t0, "cocycle_matrix");
  require_span(orbit, t1, "cocycle_matrix");
  CocycleMatrix m;
  m.gauge = gauge;
  m.t = t1 - t0;
  m.flavor = CocycleMatrix::Flavor::Psi;
  if (t0 == t1) return m;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  // Propagate both basis covectors jointly so coefficients are evaluated
  // once per stage: state (x1, y1, x2, y2).
  auto rhs = [&orbit, &gauge, t0, dir](double s, const std::array<double, 4>& v,
                                       std::array<double, 4>& dv) {
    const SigmaCoeffs c = sigma_coeffs(orbit, gauge, t0 + dir * s);
    dv[0] = dir * (-c.p * v[0] + c.kappa_p * v[1]);
    dv[1] = dir * (-v[0] - (c.v_lambda - c.p) * v[1]);
    dv[2] = dir * (-c.p * v[2] + c.kappa_p * v[3]);
    dv[3] = dir * (-v[2] - (c.v_lambda - c.p) * v[3]);
  };
  auto sol =
      integrate_dense<4>(rhs, {1.0, 0.0, 0.0, 1.0}, std::abs(t1 - t0), opt, /*store_dense=*/false);
  const auto end = sol.endpoint();
  m.a = end[0];
  m.c = end[1];
  m.b = end[2];
  m.d = end[3];
  return m;
}

CocycleMatrix cocycle_matrix(const OrbitSegment& orbit, const GaugeSpec& gauge, double t,
                             CocycleMatrix::Flavor flavor, const IntegratorOptions& opt) {
  if (flavor == CocycleMatrix::Flavor::Gamma) {
    const bool is_half = gauge.kind() == GaugeSpec::Kind::ScaledVLambda && gauge.factor() == 0.5;
    if (!is_half)
      throw std::invalid_argument(
          "cocycle_matrix: flavor Gamma requires the gauge p = V(lambda)/2");
  }
  CocycleMatrix m = cocycle_matrix_between(orbit, gauge, 0.0, t, opt);
  m.flavor = flavor;
  if (flavor == CocycleMatrix::Flavor::Gamma) {
    const double mt = orbit.damping_m(t);
    m.a /= mt;
    m.b /= mt;
    m.c /= mt;
    m.d /= mt;
  }
  return m;
}

namespace {

RiccatiResult riccati_impl(const std::function<double(double)>& kappa_at, double w0, double t_end,
                           double cap, double sample_dt, const IntegratorOptions& opt) {
  if (!(t_end > 0.0)) throw std::invalid_argument("riccati_w: t_end must be positive");
  if (!(cap > 0.0) || !(sample_dt > 0.0))
    throw std::invalid_argument("riccati_w: cap and sample_dt must be positive");
  auto rhs = [&kappa_at](double t, const std::array<double, 1>& v, std::array<double, 1>& dv) {
    dv[0] = -(v[0] * v[0] + kappa_at(t));
  };
  auto stop = [cap](double, const std::array<double, 1>& v) { return std::abs(v[0]) >= cap; };
  auto sol = integrate_dense<1>(rhs, std::array<double, 1>{w0}, t_end, opt, true, stop);

  RiccatiResult out;
  const double reach = sol.stopped() ? sol.duration() : t_end;
  for (double t = 0.0; t <= reach + 1e-12; t += sample_dt) {
    const double tq = std::min(t, reach);
    out.samples.emplace_back(tq, sol.eval(tq)[0]);
  }
  if (sol.stopped()) {
    // Bisect the cap crossing inside the final segment.
    double lo = std::max(0.0, sol.duration() - 1.0), hi = sol.duration();
    while (std::abs(sol.eval(lo)[0]) >= cap && lo > 0.0) lo = std::max(0.0, lo - 1.0);
    for (int i = 0; i < 80 && hi - lo > 1e-12; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std::abs(sol.eval(mid)[0]) >= cap ? hi : lo) = mid;
    }
    out.blow_up_time = hi;
  }
  return out;
}

}  // namespace

RiccatiResult riccati_w(const OrbitSegment& orbit, double w0, double t_end, double cap,
                        double sample_dt, const IntegratorOptions& opt) {
  require_span(orbit, t_end, "riccati_w");
  auto kap = [&orbit](double t) {
    return kappa_tilde(orbit.surface(), orbit.model(), orbit.state(t));
  };
  return riccati_impl(kap, w0, t_end, cap, sample_dt, opt);
}

RiccatiResult riccati_w(const KappaProfile& profile, double w0, double t_end, double cap,
                        double sample_dt, const IntegratorOptions& opt) {
  return riccati_impl(profile, w0, t_end, cap, sample_dt, opt);
}

TransportResult transport_renormalized(const OrbitSegment& orbit, const GaugeSpec& gauge,
                                       double x_c, double y_c, double t_from, double t_to,
                                       double renorm_dt, const IntegratorOptions& opt) {
  require_span(orbit, t_from, "transport_renormalized");
  require_span(orbit, t_to, "transport_renormalized");
  if (!(renorm_dt > 0.0))
    throw std::invalid_argument("transport_renormalized: renorm_dt must be positive");
  const double n0 = std::abs(x_c) + std::abs(y_c);
  if (n0 == 0.0) throw std::invalid_argument("transport_renormalized: zero covector");
  // Components are kept normalized to |x| + |y| = 1; the accumulated scale
  // lives entirely in log_growth = log(norm(end) / norm(start)).
  TransportResult r{x_c / n0, y_c / n0, 0.0};
  if (t_from == t_to) return r;
  const double dir = t_to > t_from ? 1.0 : -1.0;
  double t = t_from;
  while (dir * (t_to - t) > 1e-12) {
    const double step = std::min(renorm_dt, dir * (t_to - t));
    SigmaRhs rhs{&orbit, &gauge, t, dir};
    auto sol = integrate_dense<2>(rhs, {r.x_c, r.y_c}, step, opt, /*store_dense=*/false);
    const auto end = sol.endpoint();
    const double n = std::abs(end[0]) + std::abs(end[1]);
    if (n == 0.0) throw IntegrationError("covector annihilated during transport", t);
    r.x_c = end[0] / n;
    r.y_c = end[1] / n;
    r.log_growth += std::log(n);
    t += dir * step;
  }
  return r;
}

}  // namespace thermo
