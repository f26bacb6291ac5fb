#include "thermo/reports.hpp"

#include <cmath>

#include "thermo/batch.hpp"
#include "thermo/parallel.hpp"
#include "thermo/util.hpp"

namespace thermo {

CsvTable curvature_scan_csv(const ConformalTorus& surface, const IntensityModel& model,
                            const GaugeSpec& gauge, std::array<int, 3> grid, int workers,
                            CurvatureExtrema* extrema) {
  const std::size_t n = static_cast<std::size_t>(grid[0]) * grid[1] * grid[2];
  std::vector<double> xs(n), ys(n), ts(n), kp(n), bk(n), kt(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const int it = static_cast<int>(idx % grid[2]);
    const int iy = static_cast<int>((idx / grid[2]) % grid[1]);
    const int ix = static_cast<int>(idx / (static_cast<std::size_t>(grid[1]) * grid[2]));
    xs[idx] = kTwoPi * ix / grid[0];
    ys[idx] = kTwoPi * iy / grid[1];
    ts[idx] = kTwoPi * it / grid[2];
  }
  constexpr std::size_t kChunk = 4096;
  parallel_for((n + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
    const std::size_t i0 = chunk * kChunk;
    const std::size_t m = std::min(kChunk, n - i0);
    SurfaceModelBatch batch(surface, model);
    batch.curvatures(gauge, std::span<const double>(xs).subspan(i0, m),
                     std::span<const double>(ys).subspan(i0, m),
                     std::span<const double>(ts).subspan(i0, m),
                     std::span<double>(kp).subspan(i0, m), std::span<double>(bk).subspan(i0, m),
                     std::span<double>(kt).subspan(i0, m));
  });

  CsvTable csv({"x", "y", "theta", "kappa_p", "big_k", "kappa_tilde"});
  for (std::size_t idx = 0; idx < n; ++idx) {
    csv.begin_row();
    csv.add(xs[idx]);
    csv.add(ys[idx]);
    csv.add(ts[idx]);
    csv.add(kp[idx]);
    csv.add(bk[idx]);
    csv.add(kt[idx]);
    csv.end_row();
  }
  if (extrema) {
    auto scan3 = [](const std::vector<double>& v, double& mn, double& mx, double& ma) {
      mn = v[0];
      mx = v[0];
      ma = 0.0;
      for (double x : v) {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
        ma = std::max(ma, std::abs(x));
      }
    };
    scan3(kp, extrema->kp_min, extrema->kp_max, extrema->kp_max_abs);
    scan3(bk, extrema->bigk_min, extrema->bigk_max, extrema->bigk_max_abs);
    scan3(kt, extrema->ktilde_min, extrema->ktilde_max, extrema->ktilde_max_abs);
  }
  return csv;
}

CsvTable green_scan_csv(const TransversalityScan& scan) {
  CsvTable csv({"x", "y", "theta", "r_s", "r_u", "r_s_zero", "r_u_zero", "converged_s",
                "converged_u", "conjugate_s", "conjugate_u", "gap"});
  for (const auto& cell : scan.cells) {
    csv.begin_row();
    csv.add(cell.anchor.x);
    csv.add(cell.anchor.y);
    csv.add(cell.anchor.theta);
    csv.add(cell.stable.slope);
    csv.add(cell.unstable.slope);
    csv.add(cell.stable.slope_zero_gauge);
    csv.add(cell.unstable.slope_zero_gauge);
    csv.add(static_cast<long long>(cell.stable.converged));
    csv.add(static_cast<long long>(cell.unstable.converged));
    csv.add(static_cast<long long>(cell.stable.conjugate_flag));
    csv.add(static_cast<long long>(cell.unstable.conjugate_flag));
    csv.add(cell.gap);
    csv.end_row();
  }
  return csv;
}

}  // namespace thermo
