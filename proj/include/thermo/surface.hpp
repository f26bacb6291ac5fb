#pragma once

#include <array>

#include "thermo/fourier.hpp"
#include "thermo/util.hpp"

namespace thermo {

// Point of the unit tangent bundle in chart coordinates: base point (x, y)
// and fiber angle theta measured against the orthonormal frame
// e1 = e^{-f} d/dx, e2 = e^{-f} d/dy.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  PhasePoint wrapped() const { return {wrap_angle(x), wrap_angle(y), wrap_angle(theta)}; }
};

// Chart components (over d/dx, d/dy, d/dtheta) of the moving frame at a
// phase point: X the geodesic field, H the horizontal field, V the vertical
// field.
struct FrameVectors {
  std::array<double, 3> X{};
  std::array<double, 3> H{};
  std::array<double, 3> V{0.0, 0.0, 1.0};
};

// Torus [0, 2pi)^2 with the conformally flat metric g = e^{2f} (dx^2 + dy^2).
// Immutable; all partials of f are exact coefficient transforms.
class ConformalTorus {
 public:
  ConformalTorus() = default;  // flat metric
  explicit ConformalTorus(FourierField2 f);

  static ConformalTorus flat() { return ConformalTorus{}; }

  bool is_flat() const { return f_.is_zero(); }
  const FourierField2& f() const { return f_; }
  const FourierField2& f_x() const { return fx_; }
  const FourierField2& f_y() const { return fy_; }
  const FourierField2& f_xx() const { return fxx_; }
  const FourierField2& f_yy() const { return fyy_; }

  double conformal_factor(double x, double y) const { return f_(x, y); }

  // K_g = -e^{-2f} (f_xx + f_yy)
  double gaussian_curvature(double x, double y) const;

  FrameVectors frame_at(const PhasePoint& p) const;

 private:
  FourierField2 f_, fx_, fy_, fxx_, fyy_;
};

double gaussian_curvature(const ConformalTorus& surface, double x, double y);
FrameVectors frame_at(const ConformalTorus& surface, const PhasePoint& p);

// Max-norm residuals of [V,X]-H, [V,H]+X, [X,H]-K_g V with all partial
// derivatives of the frame fields taken by 4th-order central differences of
// step h. An independent check of the frame formulas.
std::array<double, 3> commutator_residual(const ConformalTorus& surface, const PhasePoint& p,
                                          double h);

}  // namespace thermo
