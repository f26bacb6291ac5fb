#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "thermo/quadrature.hpp"
#include "thermo/surface.hpp"
#include "thermo/util.hpp"

using namespace thermo;

namespace {

ConformalTorus bumpy() {
  FourierField2 f;
  f.set_coefficient(1, 1, TrigBasis::CosCos, 0.1);
  return ConformalTorus(std::move(f));
}

}  // namespace

TEST_CASE("flat metric has zero curvature") {
  const ConformalTorus flat = ConformalTorus::flat();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i)
    CHECK(gaussian_curvature(flat, kTwoPi * to_unit_double(rng()), kTwoPi * to_unit_double(rng())) ==
          0.0);
}

TEST_CASE("curvature of a single bump matches the finite-difference Laplacian") {
  const ConformalTorus s = bumpy();
  // Independent oracle: Laplacian of f by central differences.
  const double h = 1e-4;
  auto lap_fd = [&](double x, double y) {
    const auto& f = s.f();
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
  };
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    const double x = kTwoPi * to_unit_double(rng());
    const double y = kTwoPi * to_unit_double(rng());
    const double expected = -std::exp(-2.0 * s.f()(x, y)) * lap_fd(x, y);
    CHECK(std::abs(gaussian_curvature(s, x, y) - expected) < 1e-6);
  }
  // At the bump maximum the curvature is positive: f(0,0) = 0.1 and the
  // Laplacian there is -0.2, so K = 0.2 exp(-0.2).
  CHECK(gaussian_curvature(s, 0.0, 0.0) == doctest::Approx(0.2 * std::exp(-0.2)).epsilon(1e-12));
}

TEST_CASE("flat frame at axis angles") {
  const ConformalTorus flat = ConformalTorus::flat();
  const FrameVectors f0 = frame_at(flat, {0.0, 0.0, 0.0});
  CHECK(f0.X == std::array<double, 3>{1.0, 0.0, 0.0});
  CHECK(f0.H == std::array<double, 3>{-0.0, 1.0, -0.0});
  CHECK(f0.V == std::array<double, 3>{0.0, 0.0, 1.0});
  const FrameVectors f1 = frame_at(flat, {1.0, 2.0, kPi / 2});
  CHECK(std::abs(f1.X[0]) < 1e-15);
  CHECK(f1.X[1] == doctest::Approx(1.0));
  CHECK(f1.H[0] == doctest::Approx(-1.0));
  CHECK(std::abs(f1.H[1]) < 1e-15);
}

TEST_CASE("commutator residuals: flat frame is exact to rounding") {
  const ConformalTorus flat = ConformalTorus::flat();
  for (int ix = 0; ix < 4; ++ix)
    for (int iy = 0; iy < 4; ++iy)
      for (int it = 0; it < 4; ++it) {
        const auto r = commutator_residual(
            flat, {kTwoPi * ix / 4, kTwoPi * iy / 4, kTwoPi * it / 4}, 1e-4);
        CHECK(r[0] < 1e-10);
        CHECK(r[1] < 1e-10);
        CHECK(r[2] < 1e-10);
      }
}

TEST_CASE("commutator residuals on the bumpy surface") {
  const ConformalTorus s = bumpy();
  double worst = 0.0;
  for (int ix = 0; ix < 4; ++ix)
    for (int iy = 0; iy < 4; ++iy)
      for (int it = 0; it < 4; ++it) {
        const auto r = commutator_residual(
            s, {kTwoPi * ix / 4, kTwoPi * iy / 4, kTwoPi * it / 4}, 1e-4);
        worst = std::max({worst, r[0], r[1], r[2]});
      }
  CHECK(worst < 1e-6);
}

TEST_CASE("commutator residual shrinks at the stencil order under halving") {
  // With the 4th-order stencil the truncation term drops by ~16x per
  // halving; measured at steps large enough that rounding is negligible.
  const ConformalTorus s = bumpy();
  const PhasePoint p{0.9, 2.2, 0.7};
  const auto r1 = commutator_residual(s, p, 0.08);
  const auto r2 = commutator_residual(s, p, 0.04);
  const double ratio = r1[2] / r2[2];
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("Gauss-Bonnet: Liouville-weighted curvature integral vanishes") {
  const ConformalTorus s = bumpy();
  const double integral = liouville_integrate(
      s, [&](const PhasePoint& p) { return gaussian_curvature(s, p.x, p.y); }, 16, 16, 4, 1);
  CHECK(std::abs(integral) < 1e-8);
}
