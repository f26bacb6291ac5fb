#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "thermo/fourier.hpp"
#include "thermo/util.hpp"

using namespace thermo;

namespace {

// Independent oracle: direct libm sum over the coefficient tables, no
// recurrences shared with the implementation.
double naive_eval(const FourierField2& f, double x, double y) {
  double acc = 0.0;
  for (int j = 0; j <= f.degree_x(); ++j)
    for (int k = 0; k <= f.degree_y(); ++k) {
      acc += f.coefficient(j, k, TrigBasis::CosCos) * std::cos(j * x) * std::cos(k * y);
      acc += f.coefficient(j, k, TrigBasis::CosSin) * std::cos(j * x) * std::sin(k * y);
      acc += f.coefficient(j, k, TrigBasis::SinCos) * std::sin(j * x) * std::cos(k * y);
      acc += f.coefficient(j, k, TrigBasis::SinSin) * std::sin(j * x) * std::sin(k * y);
    }
  return acc;
}

FourierField2 random_field(std::mt19937_64& rng, int dx, int dy) {
  FourierField2 f;
  for (int j = 0; j <= dx; ++j)
    for (int k = 0; k <= dy; ++k)
      for (auto b : {TrigBasis::CosCos, TrigBasis::CosSin, TrigBasis::SinCos, TrigBasis::SinSin})
        f.set_coefficient(j, k, b, 2.0 * to_unit_double(rng()) - 1.0);
  return f;
}

}  // namespace

TEST_CASE("evaluation matches the direct trigonometric sum") {
  std::mt19937_64 rng(11);
  const FourierField2 f = random_field(rng, 8, 8);
  for (int i = 0; i < 200; ++i) {
    const double x = kTwoPi * to_unit_double(rng());
    const double y = kTwoPi * to_unit_double(rng());
    CHECK(f(x, y) == doctest::Approx(naive_eval(f, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("evaluation is 2pi periodic in both axes") {
  std::mt19937_64 rng(12);
  const FourierField2 f = random_field(rng, 5, 4);
  for (int i = 0; i < 50; ++i) {
    const double x = kTwoPi * to_unit_double(rng());
    const double y = kTwoPi * to_unit_double(rng());
    CHECK(std::abs(f(x + kTwoPi, y) - f(x, y)) < 1e-12);
    CHECK(std::abs(f(x, y - kTwoPi) - f(x, y)) < 1e-12);
  }
}

TEST_CASE("analytic partials agree with central finite differences") {
  std::mt19937_64 rng(13);
  const FourierField2 f = random_field(rng, 8, 8);
  const FourierField2 fx = f.derivative_x();
  const FourierField2 fy = f.derivative_y();
  const FourierField2 fxx = fx.derivative_x();
  const FourierField2 fyy = fy.derivative_y();
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const double x = kTwoPi * to_unit_double(rng());
    const double y = kTwoPi * to_unit_double(rng());
    const double dx_fd = (f(x + h, y) - f(x - h, y)) / (2 * h);
    const double dy_fd = (f(x, y + h) - f(x, y - h)) / (2 * h);
    const double dxx_fd = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
    const double dyy_fd = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
    CHECK(std::abs(fx(x, y) - dx_fd) < 1e-6);
    CHECK(std::abs(fy(x, y) - dy_fd) < 1e-6);
    CHECK(std::abs(fxx(x, y) - dxx_fd) < 1e-4);
    CHECK(std::abs(fyy(x, y) - dyy_fd) < 1e-4);
  }
}

TEST_CASE("derivatives of single modes are exact") {
  FourierField2 f;
  f.set_coefficient(3, 2, TrigBasis::CosSin, 1.5);  // 1.5 cos(3x) sin(2y)
  const FourierField2 fx = f.derivative_x();
  // d/dx -> -4.5 sin(3x) sin(2y)
  CHECK(fx.coefficient(3, 2, TrigBasis::SinSin) == doctest::Approx(-4.5));
  const FourierField2 fy = f.derivative_y();
  // d/dy -> 3.0 cos(3x) cos(2y)
  CHECK(fy.coefficient(3, 2, TrigBasis::CosCos) == doctest::Approx(3.0));
}

TEST_CASE("coefficient table grows on demand and rejects out-of-range modes") {
  FourierField2 f;
  CHECK(f.is_zero());
  f.set_coefficient(6, 1, TrigBasis::SinCos, 0.25);
  CHECK(f.degree_x() == 6);
  CHECK(f.degree_y() == 1);
  CHECK(f.coefficient(6, 1, TrigBasis::SinCos) == 0.25);
  CHECK(f.coefficient(2, 0, TrigBasis::CosCos) == 0.0);
  CHECK_THROWS_AS(f.set_coefficient(-1, 0, TrigBasis::CosCos, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.set_coefficient(0, 40, TrigBasis::CosCos, 1.0), std::invalid_argument);
}
