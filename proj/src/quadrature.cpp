#include "thermo/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "thermo/batch.hpp"
#include "thermo/parallel.hpp"
#include "thermo/util.hpp"

namespace thermo {

namespace {

constexpr std::size_t kChunk = 4096;

void check_grid(int n_x, int n_y, int n_theta) {
  if (n_x < 4 || n_y < 4 || n_theta < 4)
    throw std::invalid_argument("quadrature grid sizes must be at least 4");
}

void fill_grid_chunk(std::array<int, 3> grid, std::size_t i0, std::size_t m,
                     std::vector<double>& xs, std::vector<double>& ys, std::vector<double>& ts) {
  xs.resize(m);
  ys.resize(m);
  ts.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t idx = i0 + i;
    const int it = static_cast<int>(idx % grid[2]);
    const int iy = static_cast<int>((idx / grid[2]) % grid[1]);
    const int ix = static_cast<int>(idx / (static_cast<std::size_t>(grid[1]) * grid[2]));
    xs[i] = kTwoPi * ix / grid[0];
    ys[i] = kTwoPi * iy / grid[1];
    ts[i] = kTwoPi * it / grid[2];
  }
}

}  // namespace

double liouville_integrate(const ConformalTorus& surface,
                           const std::function<double(const PhasePoint&)>& observable, int n_x,
                           int n_y, int n_theta, int workers) {
  check_grid(n_x, n_y, n_theta);
  const std::size_t n = static_cast<std::size_t>(n_x) * n_y * n_theta;
  std::vector<double> contrib(n);
  parallel_for((n + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
    const std::size_t i0 = chunk * kChunk;
    const std::size_t m = std::min(kChunk, n - i0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t idx = i0 + i;
      const int it = static_cast<int>(idx % n_theta);
      const int iy = static_cast<int>((idx / n_theta) % n_y);
      const int ix = static_cast<int>(idx / (static_cast<std::size_t>(n_y) * n_theta));
      const PhasePoint p{kTwoPi * ix / n_x, kTwoPi * iy / n_y, kTwoPi * it / n_theta};
      contrib[idx] = observable(p) * std::exp(2.0 * surface.f()(p.x, p.y));
    }
  });
  const double cell = kTwoPi * kTwoPi * kTwoPi / static_cast<double>(n);
  return pairwise_sum(contrib) * cell;
}

HopfReport hopf_check(const ConformalTorus& surface, const IntensityModel& model,
                      const GaugeSpec& gauge, std::array<int, 3> grid, int workers) {
  check_grid(grid[0], grid[1], grid[2]);
  const std::size_t n = static_cast<std::size_t>(grid[0]) * grid[1] * grid[2];
  std::vector<double> kappa_w(n), gauge_w(n), magnetic_w(n);
  parallel_for((n + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
    const std::size_t i0 = chunk * kChunk;
    const std::size_t m = std::min(kChunk, n - i0);
    std::vector<double> xs, ys, ts;
    fill_grid_chunk(grid, i0, m, xs, ys, ts);
    SurfaceModelBatch batch(surface, model);
    batch.hopf_integrands(gauge, xs, ys, ts, std::span<double>(kappa_w).subspan(i0, m),
                          std::span<double>(gauge_w).subspan(i0, m),
                          std::span<double>(magnetic_w).subspan(i0, m), {});
  });
  const double cell = kTwoPi * kTwoPi * kTwoPi / static_cast<double>(n);
  HopfReport rep;
  rep.gauge_label = gauge.label();
  rep.grid = grid;
  rep.kappa_integral = pairwise_sum(kappa_w) * cell;
  rep.gauge_integral = pairwise_sum(gauge_w) * cell;
  rep.margin = rep.gauge_integral - rep.kappa_integral;
  rep.euler_term = pairwise_sum(magnetic_w) * cell;  // 2 pi chi vanishes on the torus
  return rep;
}

double mu_volume_distortion(const ConformalTorus& surface, const IntensityModel& model,
                            const PhasePoint& v0, double t, double h,
                            const IntegratorOptions& opt) {
  if (!(t > 0.0) || !(h > 0.0))
    throw std::invalid_argument("mu_volume_distortion: t and h must be positive");
  // Central-difference 3x3 Jacobian of the flow map from 6 orbits.
  std::array<std::array<double, 3>, 3> jac{};
  for (int axis = 0; axis < 3; ++axis) {
    PhasePoint plus = v0, minus = v0;
    (axis == 0 ? plus.x : axis == 1 ? plus.y : plus.theta) += h;
    (axis == 0 ? minus.x : axis == 1 ? minus.y : minus.theta) -= h;
    const auto pe = integrate_orbit(surface, model, plus, 0.0, t, opt).raw_state(t);
    const auto me = integrate_orbit(surface, model, minus, 0.0, t, opt).raw_state(t);
    for (int i = 0; i < 3; ++i) jac[i][axis] = (pe[i] - me[i]) / (2.0 * h);
  }
  const double det = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1]) -
                     jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0]) +
                     jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]);
  const auto end = integrate_orbit(surface, model, v0, 0.0, t, opt).state(t);
  const double weight_ratio =
      std::exp(2.0 * surface.f()(end.x, end.y)) / std::exp(2.0 * surface.f()(v0.x, v0.y));
  return std::abs(det) * weight_ratio;
}

}  // namespace thermo
