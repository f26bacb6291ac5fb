#include "thermo/orbit.hpp"

#include <cmath>
#include <stdexcept>

#include "thermo/util.hpp"

namespace thermo {

std::array<double, 3> generator(const ConformalTorus& surface, const IntensityModel& model,
                                const PhasePoint& p) {
  const double cf = std::exp(-surface.f()(p.x, p.y));
  const double fx = surface.f_x()(p.x, p.y);
  const double fy = surface.f_y()(p.x, p.y);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double lam = model.lambda(p);
  return {cf * c, cf * s, cf * (-fx * s + fy * c) + lam};
}

namespace {

struct OrbitRhs {
  const ConformalTorus* surface;
  const IntensityModel* model;
  double direction;  // +1 forward, -1 backward

  void operator()(double, const std::array<double, 4>& y, std::array<double, 4>& dy) const {
    const PhasePoint p{wrap_angle(y[0]), wrap_angle(y[1]), wrap_angle(y[2])};
    const double cf = std::exp(-surface->f()(p.x, p.y));
    const double fx = surface->f_x()(p.x, p.y);
    const double fy = surface->f_y()(p.x, p.y);
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    double lam = 0.0, vlam = 0.0;
    model->lambda_and_v(p, lam, vlam);
    dy[0] = direction * (cf * c);
    dy[1] = direction * (cf * s);
    dy[2] = direction * (cf * (-fx * s + fy * c) + lam);
    dy[3] = direction * vlam;
  }
};

}  // namespace

bool OrbitSegment::covers(double t) const {
  const double slack = 1e-9 * std::max(1.0, std::max(std::abs(t_min_), t_max_));
  return t >= t_min_ - slack && t <= t_max_ + slack;
}

std::array<double, 4> OrbitSegment::raw_state(double t) const {
  if (!covers(t)) throw std::out_of_range("orbit queried outside its time span");
  if (t >= 0.0) {
    if (forward_.segments_.empty()) throw std::out_of_range("orbit has no forward span");
    return forward_.eval(std::min(t, t_max_));
  }
  if (backward_.segments_.empty()) throw std::out_of_range("orbit has no backward span");
  return backward_.eval(std::min(-t, -t_min_));
}

PhasePoint OrbitSegment::state(double t) const {
  const auto y = raw_state(t);
  return PhasePoint{y[0], y[1], y[2]}.wrapped();
}

double OrbitSegment::damping_m(double t) const {
  const auto y = raw_state(t);
  return std::exp(-0.5 * y[3]);
}

double damping_m(const OrbitSegment& orbit, double t) { return orbit.damping_m(t); }

OrbitSegment integrate_orbit(const ConformalTorus& surface, const IntensityModel& model,
                             const PhasePoint& v0, double t_min, double t_max,
                             const IntegratorOptions& opt) {
  if (!(t_min <= 0.0) || !(t_max >= 0.0))
    throw std::invalid_argument("integrate_orbit: span must satisfy t_min <= 0 <= t_max");
  if (!std::isfinite(t_min) || !std::isfinite(t_max))
    throw std::invalid_argument("integrate_orbit: span must be finite");

  OrbitSegment orbit;
  orbit.surface_ = std::make_shared<const ConformalTorus>(surface);
  orbit.model_ = std::make_shared<const IntensityModel>(model);
  orbit.v0_ = v0;
  orbit.t_min_ = t_min;
  orbit.t_max_ = t_max;
  orbit.options_ = opt;

  const std::array<double, 4> y0{v0.x, v0.y, v0.theta, 0.0};
  if (t_max > 0.0) {
    OrbitRhs rhs{orbit.surface_.get(), orbit.model_.get(), +1.0};
    orbit.forward_ = integrate_dense<4>(rhs, y0, t_max, opt);
    orbit.stats_.absorb(orbit.forward_.stats());
  } else {
    // Degenerate forward span: a single constant segment at t = 0.
    typename DenseSolution<4>::Segment seg;
    seg.t0 = 0.0;
    seg.h = 1.0;
    for (int i = 0; i < 4; ++i) {
      seg.c[0][i] = y0[i];
      seg.c[1][i] = seg.c[2][i] = seg.c[3][i] = seg.c[4][i] = 0.0;
    }
    orbit.forward_.segments_.push_back(seg);
    orbit.forward_.duration_ = 0.0;
  }
  if (t_min < 0.0) {
    OrbitRhs rhs{orbit.surface_.get(), orbit.model_.get(), -1.0};
    orbit.backward_ = integrate_dense<4>(rhs, y0, -t_min, opt);
    orbit.stats_.absorb(orbit.backward_.stats());
  }
  return orbit;
}

double reverse_orbit_check(const ConformalTorus& surface, const IntensityModel& model,
                           const PhasePoint& v0, double T, const IntegratorOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("reverse_orbit_check: T must be positive");
  const OrbitSegment fwd = integrate_orbit(surface, model, v0, 0.0, T, opt);
  const PhasePoint end = fwd.state(T);
  const PhasePoint flipped{end.x, end.y, end.theta + kPi};
  const IntensityModel reversed = model.flipped();
  const OrbitSegment back = integrate_orbit(surface, reversed, flipped, 0.0, T, opt);
  const PhasePoint ret = back.state(T);
  const PhasePoint twice{ret.x, ret.y, ret.theta + kPi};
  return torus_distance({twice.x, twice.y, twice.theta}, {v0.x, v0.y, v0.theta});
}

std::array<double, 2> exp_map(const ConformalTorus& surface, const IntensityModel& model,
                              double x0, double y0, double theta0, double t,
                              const IntegratorOptions& opt) {
  if (!(t >= 0.0)) throw std::invalid_argument("exp_map: t must be non-negative");
  if (t == 0.0) return {wrap_angle(x0), wrap_angle(y0)};
  const OrbitSegment orbit = integrate_orbit(surface, model, {x0, y0, theta0}, 0.0, t, opt);
  const PhasePoint p = orbit.state(t);
  return {p.x, p.y};
}

double exp_jacobian_fd(const ConformalTorus& surface, const IntensityModel& model, double x0,
                       double y0, double theta0, double t, double eps,
                       const IntegratorOptions& opt) {
  if (!(eps > 0.0) || !(t > 0.0))
    throw std::invalid_argument("exp_jacobian_fd: eps and t must be positive");
  const OrbitSegment base = integrate_orbit(surface, model, {x0, y0, theta0}, 0.0, t, opt);
  const OrbitSegment plus = integrate_orbit(surface, model, {x0, y0, theta0 + eps}, 0.0, t, opt);
  const OrbitSegment minus = integrate_orbit(surface, model, {x0, y0, theta0 - eps}, 0.0, t, opt);
  const auto bp = base.raw_state(t);
  const auto pp = plus.raw_state(t);
  const auto mp = minus.raw_state(t);
  // Unwrapped coordinates of the perturbed orbits stay on consistent
  // branches for small eps, so a direct difference is valid.
  const double dx = (pp[0] - mp[0]) / (2.0 * eps);
  const double dy = (pp[1] - mp[1]) / (2.0 * eps);
  // Signed component along J(velocity), the leftward unit normal, measured
  // in the metric at the endpoint.
  const double ef = std::exp(surface.f()(wrap_angle(bp[0]), wrap_angle(bp[1])));
  const double c = std::cos(bp[2]);
  const double s = std::sin(bp[2]);
  return std::abs(ef * (-s * dx + c * dy));
}

}  // namespace thermo
