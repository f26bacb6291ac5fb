#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "thermo/fourier.hpp"
#include "thermo/simd/kernels.hpp"
#include "thermo/util.hpp"

using namespace thermo;

namespace {

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = kTwoPi * to_unit_double(rng());
  return v;
}

}  // namespace

TEST_CASE("scalar trig tables match libm directly") {
  std::mt19937_64 rng(1);
  const std::size_t n = 257;
  const int deg = 12;
  const auto ang = random_angles(rng, n);
  std::vector<double> cj((deg + 1) * n), sj((deg + 1) * n);
  kern::scalar_kernels().trig_table(ang.data(), n, deg, cj.data(), sj.data());
  for (int j = 0; j <= deg; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(cj[j * n + i] - std::cos(j * ang[i])) < 1e-12);
      CHECK(std::abs(sj[j * n + i] - std::sin(j * ang[i])) < 1e-12);
    }
}

TEST_CASE("avx2 kernels agree with the scalar reference bitwise") {
  const kern::Kernels* avx2 = kern::avx2_kernels();
  if (!avx2) {
    MESSAGE("AVX2 unavailable on this machine; skipping");
    return;
  }
  std::mt19937_64 rng(2);
  const std::size_t n = 1003;  // odd length exercises the scalar tail
  const int dx = 7, dy = 5, dt = 4;

  const auto xs = random_angles(rng, n);
  const auto ys = random_angles(rng, n);
  const auto ths = random_angles(rng, n);

  std::vector<double> cjx_s((dx + 1) * n), sjx_s((dx + 1) * n);
  std::vector<double> cjx_v((dx + 1) * n), sjx_v((dx + 1) * n);
  kern::scalar_kernels().trig_table(xs.data(), n, dx, cjx_s.data(), sjx_s.data());
  avx2->trig_table(xs.data(), n, dx, cjx_v.data(), sjx_v.data());
  CHECK(cjx_s == cjx_v);
  CHECK(sjx_s == sjx_v);

  std::vector<double> cky((dy + 1) * n), sky((dy + 1) * n);
  kern::scalar_kernels().trig_table(ys.data(), n, dy, cky.data(), sky.data());

  // dense random coefficient tables
  std::vector<double> cc((dx + 1) * (dy + 1)), cs(cc.size()), sc(cc.size()), ss(cc.size());
  for (auto* t : {&cc, &cs, &sc, &ss})
    for (auto& v : *t) v = 2.0 * to_unit_double(rng()) - 1.0;

  std::vector<double> out_s(n), out_v(n);
  kern::scalar_kernels().contract2(n, dx, dy, cc.data(), cs.data(), sc.data(), ss.data(),
                                   cjx_s.data(), sjx_s.data(), cky.data(), sky.data(),
                                   out_s.data());
  avx2->contract2(n, dx, dy, cc.data(), cs.data(), sc.data(), ss.data(), cjx_s.data(),
                  sjx_s.data(), cky.data(), sky.data(), out_v.data());
  CHECK(out_s == out_v);

  std::vector<double> cth((dt + 1) * n), sth((dt + 1) * n);
  kern::scalar_kernels().trig_table(ths.data(), n, dt, cth.data(), sth.data());
  std::vector<double> A((dt + 1) * n), B((dt + 1) * n);
  for (auto* t : {&A, &B})
    for (auto& v : *t) v = 2.0 * to_unit_double(rng()) - 1.0;
  kern::scalar_kernels().theta_combine(n, dt, A.data(), B.data(), cth.data(), sth.data(),
                                       out_s.data());
  avx2->theta_combine(n, dt, A.data(), B.data(), cth.data(), sth.data(), out_v.data());
  CHECK(out_s == out_v);
}

TEST_CASE("batch field evaluation agrees with pointwise evaluation") {
  std::mt19937_64 rng(3);
  FourierField2 f;
  for (int j = 0; j <= 4; ++j)
    for (int k = 0; k <= 3; ++k)
      for (auto b : {TrigBasis::CosCos, TrigBasis::CosSin, TrigBasis::SinCos, TrigBasis::SinSin})
        f.set_coefficient(j, k, b, 2.0 * to_unit_double(rng()) - 1.0);

  const std::size_t n = 513;
  const auto xs = random_angles(rng, n);
  const auto ys = random_angles(rng, n);
  std::vector<double> out(n);
  f.eval_batch(xs, ys, out);
  for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(f(xs[i], ys[i])).epsilon(1e-14));
}

TEST_CASE("active kernel dispatch returns a usable implementation") {
  const kern::Kernels& k = kern::active();
  double angle = 0.7;
  double cj[3], sj[3];
  k.trig_table(&angle, 1, 2, cj, sj);
  CHECK(cj[0] == 1.0);
  CHECK(std::abs(cj[1] - std::cos(0.7)) < 1e-15);
  CHECK(std::abs(sj[2] - std::sin(1.4)) < 1e-12);
}
