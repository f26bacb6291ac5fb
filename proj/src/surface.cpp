#include "thermo/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace thermo {

ConformalTorus::ConformalTorus(FourierField2 f)
    : f_(std::move(f)),
      fx_(f_.derivative_x()),
      fy_(f_.derivative_y()),
      fxx_(fx_.derivative_x()),
      fyy_(fy_.derivative_y()) {}

double ConformalTorus::gaussian_curvature(double x, double y) const {
  const double lap = fxx_(x, y) + fyy_(x, y);
  return -std::exp(-2.0 * f_(x, y)) * lap;
}

FrameVectors ConformalTorus::frame_at(const PhasePoint& p) const {
  const double cf = std::exp(-f_(p.x, p.y));
  const double fx = fx_(p.x, p.y);
  const double fy = fy_(p.x, p.y);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  FrameVectors fr;
  fr.X = {cf * c, cf * s, cf * (-fx * s + fy * c)};
  fr.H = {cf * -s, cf * c, cf * -(fx * c + fy * s)};
  fr.V = {0.0, 0.0, 1.0};
  return fr;
}

double gaussian_curvature(const ConformalTorus& surface, double x, double y) {
  return surface.gaussian_curvature(x, y);
}

FrameVectors frame_at(const ConformalTorus& surface, const PhasePoint& p) {
  return surface.frame_at(p);
}

namespace {

using Vec3 = std::array<double, 3>;

// 4th-order central difference of the frame components along chart axis
// `axis`, returning the 3x3 matrix d(component i)/d(axis j) one column at a
// time via repeated evaluation.
std::array<Vec3, 3> frame_partials(const ConformalTorus& surface, const PhasePoint& p, double h,
                                   const Vec3& (*pick)(const FrameVectors&)) {
  std::array<Vec3, 3> d{};  // d[axis][component]
  for (int axis = 0; axis < 3; ++axis) {
    auto shift = [&](double delta) {
      PhasePoint q = p;
      (axis == 0 ? q.x : axis == 1 ? q.y : q.theta) += delta;
      return pick(surface.frame_at(q));
    };
    const Vec3 p2 = shift(2.0 * h), p1 = shift(h), m1 = shift(-h), m2 = shift(-2.0 * h);
    for (int i = 0; i < 3; ++i)
      d[axis][i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
  }
  return d;
}

const Vec3& pick_x(const FrameVectors& f) { return f.X; }
const Vec3& pick_h(const FrameVectors& f) { return f.H; }
const Vec3& pick_v(const FrameVectors& f) { return f.V; }

Vec3 bracket(const Vec3& a, const std::array<Vec3, 3>& da, const Vec3& b,
             const std::array<Vec3, 3>& db) {
  // [A,B]^i = A^j dB^i/dx^j - B^j dA^i/dx^j
  Vec3 r{};
  for (int i = 0; i < 3; ++i) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += a[j] * db[j][i] - b[j] * da[j][i];
    r[i] = v;
  }
  return r;
}

}  // namespace

std::array<double, 3> commutator_residual(const ConformalTorus& surface, const PhasePoint& p,
                                          double h) {
  if (!(h > 0.0)) throw std::invalid_argument("commutator_residual: h must be positive");
  const FrameVectors fr = surface.frame_at(p);
  const auto dX = frame_partials(surface, p, h, pick_x);
  const auto dH = frame_partials(surface, p, h, pick_h);
  const auto dV = frame_partials(surface, p, h, pick_v);

  const Vec3 vx = bracket(fr.V, dV, fr.X, dX);
  const Vec3 vh = bracket(fr.V, dV, fr.H, dH);
  const Vec3 xh = bracket(fr.X, dX, fr.H, dH);
  const double kg = surface.gaussian_curvature(p.x, p.y);

  auto max_abs = [](const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
  };
  Vec3 r1{vx[0] - fr.H[0], vx[1] - fr.H[1], vx[2] - fr.H[2]};
  Vec3 r2{vh[0] + fr.X[0], vh[1] + fr.X[1], vh[2] + fr.X[2]};
  Vec3 r3{xh[0] - kg * fr.V[0], xh[1] - kg * fr.V[1], xh[2] - kg * fr.V[2]};
  return {max_abs(r1), max_abs(r2), max_abs(r3)};
}

}  // namespace thermo
