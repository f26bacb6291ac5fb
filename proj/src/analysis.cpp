#include "thermo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermo/parallel.hpp"
#include "thermo/util.hpp"

namespace thermo {

namespace {

constexpr double kScanStep = 0.05;

struct ZeroCrossing {
  double time;
  double lo, hi;
  double residual;
};

// Scans f on [step, T] for a sign change and refines it by bisection.
std::optional<ZeroCrossing> scan_and_bisect(const std::function<double(double)>& f, double T_max,
                                            double tol) {
  double t_prev = std::min(kScanStep, T_max);
  double f_prev = f(t_prev);
  if (f_prev == 0.0) return ZeroCrossing{t_prev, t_prev, t_prev, 0.0};
  for (double t = t_prev + kScanStep; t <= T_max + 1e-12; t += kScanStep) {
    const double tq = std::min(t, T_max);
    const double ft = f(tq);
    if (ft == 0.0) return ZeroCrossing{tq, t_prev, tq, 0.0};
    if ((f_prev < 0.0) != (ft < 0.0)) {
      double lo = t_prev, hi = tq;
      double flo = f_prev;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) != (fm < 0.0))
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      const double tz = 0.5 * (lo + hi);
      return ZeroCrossing{tz, t_prev, tq, std::abs(f(tz))};
    }
    t_prev = tq;
    f_prev = ft;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> first_conjugate_time(const OrbitSegment& orbit, double T_max, double tol,
                                           const IntegratorOptions& opt) {
  if (!(T_max > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("first_conjugate_time: T_max and tol must be positive");
  if (!orbit.covers(T_max))
    throw std::out_of_range("first_conjugate_time: orbit does not span [0, T_max]");
  const ZSolution z = propagate_z_dense(orbit, 0.0, 1.0, T_max, opt);
  auto f = [&z](double t) { return z.eval(t)[0]; };
  const auto hit = scan_and_bisect(f, T_max, tol);
  if (!hit) return std::nullopt;
  return hit->time;
}

std::optional<double> first_conjugate_time(const KappaProfile& profile, double T_max, double tol,
                                           const IntegratorOptions& opt) {
  if (!(T_max > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("first_conjugate_time: T_max and tol must be positive");
  const ZSolution z = propagate_z_dense(profile, 0.0, 1.0, T_max, opt);
  auto f = [&z](double t) { return z.eval(t)[0]; };
  const auto hit = scan_and_bisect(f, T_max, tol);
  if (!hit) return std::nullopt;
  return hit->time;
}

ConjugateReport conjugate_report(const OrbitSegment& orbit, double T_max, double tol,
                                 const IntegratorOptions& opt) {
  ConjugateReport rep;
  rep.v0 = orbit.initial_point();
  rep.detector = ConjugateDetector::Jacobi;
  const ZSolution z = propagate_z_dense(orbit, 0.0, 1.0, T_max, opt);
  auto f = [&z](double t) { return z.eval(t)[0]; };
  const auto hit = scan_and_bisect(f, T_max, tol);
  if (hit) {
    rep.time = hit->time;
    rep.bracket_lo = hit->lo;
    rep.bracket_hi = hit->hi;
    rep.residual = hit->residual;
  }
  return rep;
}

std::optional<double> first_conjugate_time_expfd(const ConformalTorus& surface,
                                                 const IntensityModel& model, const PhasePoint& v0,
                                                 double T_max, double tol, double eps,
                                                 const IntegratorOptions& opt) {
  if (!(T_max > 0.0) || !(tol > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("first_conjugate_time_expfd: arguments must be positive");
  const OrbitSegment base = integrate_orbit(surface, model, v0, 0.0, T_max, opt);
  const OrbitSegment plus =
      integrate_orbit(surface, model, {v0.x, v0.y, v0.theta + eps}, 0.0, T_max, opt);
  const OrbitSegment minus =
      integrate_orbit(surface, model, {v0.x, v0.y, v0.theta - eps}, 0.0, T_max, opt);
  auto normal = [&](double t) {
    const auto bp = base.raw_state(t);
    const auto pp = plus.raw_state(t);
    const auto mp = minus.raw_state(t);
    const double dx = (pp[0] - mp[0]) / (2.0 * eps);
    const double dy = (pp[1] - mp[1]) / (2.0 * eps);
    const double ef = std::exp(surface.f()(wrap_angle(bp[0]), wrap_angle(bp[1])));
    return ef * (-std::sin(bp[2]) * dx + std::cos(bp[2]) * dy);
  };
  const auto hit = scan_and_bisect(normal, T_max, tol);
  if (!hit) return std::nullopt;
  return hit->time;
}

namespace {

GreenEstimate green_slope_at_time(const OrbitSegment& orbit, GreenSide side,
                                  const GaugeSpec& gauge, double anchor_time,
                                  const GreenOptions& opt) {
  if (opt.t0_schedule.empty())
    throw std::invalid_argument("green_slope: empty t0 schedule");
  GreenEstimate est;
  est.side = side;
  est.gauge = gauge;
  est.anchor = orbit.state(anchor_time);
  const double sign = side == GreenSide::Stable ? 1.0 : -1.0;
  double prev_slope = 0.0;
  bool have_prev = false;
  for (double t0 : opt.t0_schedule) {
    const double from = anchor_time + sign * t0;
    if (!orbit.covers(from))
      throw std::out_of_range("green_slope: orbit does not span the t0 schedule");
    const TransportResult tr = transport_renormalized(orbit, gauge, 1.0, 0.0, from, anchor_time,
                                                      opt.renorm_dt, opt.transport);
    est.t0_used.push_back(t0);
    if (std::abs(tr.y_c) <= 1e-14) {
      est.conjugate_flag = true;
      est.slopes.push_back(std::numeric_limits<double>::infinity());
      have_prev = false;
      continue;
    }
    const double slope = tr.x_c / tr.y_c;
    est.slopes.push_back(slope);
    est.slope = slope;
    if (have_prev && std::abs(slope - prev_slope) < opt.tol) {
      est.converged = true;
      break;
    }
    prev_slope = slope;
    have_prev = true;
  }
  const double p_anchor = gauge.p(orbit.surface(), orbit.model(), est.anchor);
  est.slope_zero_gauge = rebase_slope(est.slope, p_anchor, 0.0);
  return est;
}

}  // namespace

GreenEstimate green_slope(const OrbitSegment& orbit, GreenSide side, const GaugeSpec& gauge,
                          const GreenOptions& opt) {
  return green_slope_at_time(orbit, side, gauge, 0.0, opt);
}

GreenEstimate green_w_slope(const KappaProfile& profile, GreenSide side, const GreenOptions& opt) {
  GreenEstimate est;
  est.side = side;
  est.gauge = GaugeSpec::zero();
  const double sign = side == GreenSide::Stable ? 1.0 : -1.0;
  double prev_slope = 0.0;
  bool have_prev = false;
  for (double t0 : opt.t0_schedule) {
    // Solution vanishing at sign*t0, integrated back to 0 in renormalized
    // chunks; the w slope z'(0)/z(0) is scale invariant.
    double t = sign * t0;
    double z = 0.0, zd = 1.0;
    while (std::abs(t) > 1e-12) {
      const double step = std::min(opt.renorm_dt, std::abs(t));
      const double dir = t > 0.0 ? -1.0 : 1.0;  // toward zero
      const double t_here = t;
      auto rhs = [&profile, t_here, dir](double s, const std::array<double, 2>& v,
                                         std::array<double, 2>& dv) {
        const double kt = profile(t_here + dir * s);
        dv[0] = dir * v[1];
        dv[1] = dir * (-kt * v[0]);
      };
      auto sol = integrate_dense<2>(rhs, {z, zd}, step, opt.transport, false);
      const auto end = sol.endpoint();
      const double n = std::abs(end[0]) + std::abs(end[1]);
      z = end[0] / n;
      zd = end[1] / n;
      t += dir * step;
    }
    est.t0_used.push_back(t0);
    if (std::abs(z) <= 1e-14) {
      est.conjugate_flag = true;
      est.slopes.push_back(std::numeric_limits<double>::infinity());
      have_prev = false;
      continue;
    }
    const double slope = zd / z;
    est.slopes.push_back(slope);
    est.slope = slope;
    if (have_prev && std::abs(slope - prev_slope) < opt.tol) {
      est.converged = true;
      break;
    }
    prev_slope = slope;
    have_prev = true;
  }
  est.slope_zero_gauge = est.slope;
  return est;
}

std::pair<GreenEstimate, GreenEstimate> green_pair_at(const ConformalTorus& surface,
                                                      const IntensityModel& model,
                                                      const PhasePoint& state,
                                                      const GaugeSpec& gauge,
                                                      const GreenOptions& opt,
                                                      const IntegratorOptions& orbit_opt) {
  const double t0max = opt.t0_schedule.back();
  const OrbitSegment orbit = integrate_orbit(surface, model, state, -t0max, t0max, orbit_opt);
  return {green_slope(orbit, GreenSide::Stable, gauge, opt),
          green_slope(orbit, GreenSide::Unstable, gauge, opt)};
}

double lyapunov_exponent(const OrbitSegment& orbit, const SigmaCovector& xi0, double T,
                         double renorm_dt, const IntegratorOptions& transport_opt) {
  if (!(T > 0.0)) throw std::invalid_argument("lyapunov_exponent: T must be positive");
  const TransportResult tr = transport_renormalized(orbit, xi0.gauge, xi0.x_c, xi0.y_c,
                                                    xi0.anchor_time, xi0.anchor_time + T,
                                                    renorm_dt, transport_opt);
  return tr.log_growth / T;
}

double lyapunov_exponent(const ConformalTorus& surface, const IntensityModel& model,
                         const PhasePoint& v0, const SigmaCovector& xi0, double T,
                         double renorm_dt, const IntegratorOptions& orbit_opt,
                         const IntegratorOptions& transport_opt) {
  const OrbitSegment orbit =
      integrate_orbit(surface, model, v0, std::min(0.0, xi0.anchor_time),
                      std::max(xi0.anchor_time + T, 0.0), orbit_opt);
  return lyapunov_exponent(orbit, xi0, T, renorm_dt, transport_opt);
}

namespace {

double central_diff4(const std::function<double(double)>& f, double t, double h) {
  return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}

}  // namespace

double riccati_residual(const OrbitSegment& orbit, const GaugeSpec& gauge,
                        const std::function<double(double)>& slope_at, double h,
                        std::span<const double> sample_times) {
  if (!(h > 0.0)) throw std::invalid_argument("riccati_residual: h must be positive");
  double worst = 0.0;
  for (double t : sample_times) {
    const SigmaCoeffs c = sigma_coeffs(orbit, gauge, t);
    const double r = slope_at(t);
    const double fr = central_diff4(slope_at, t, h);
    worst = std::max(worst, std::abs(r * r + (c.v_lambda - 2.0 * c.p) * r + c.kappa_p - fr));
  }
  return worst;
}

double synthesize_zero_gauge(const OrbitSegment& orbit,
                             const std::function<double(double)>& unstable_slope_at, double h,
                             std::span<const double> sample_times) {
  if (!(h > 0.0)) throw std::invalid_argument("synthesize_zero_gauge: h must be positive");
  const GaugeSpec zero = GaugeSpec::zero();
  auto p_hat = [&](double t) {
    const PhasePoint at = orbit.state(t);
    return orbit.model().v_lambda(at) - unstable_slope_at(t);
  };
  double worst = 0.0;
  for (double t : sample_times) {
    const SigmaCoeffs c0 = sigma_coeffs(orbit, zero, t);  // kappa_p = kappa_0
    const double ph = p_hat(t);
    const double fph = central_diff4(p_hat, t, h);
    const double kp = c0.kappa_p + fph + ph * (ph - c0.v_lambda);
    worst = std::max(worst, std::abs(kp));
  }
  return worst;
}

TransversalityScan transversality_scan(const ConformalTorus& surface, const IntensityModel& model,
                                       std::array<int, 3> grid, const GaugeSpec& gauge,
                                       const GreenOptions& opt, const IntegratorOptions& orbit_opt,
                                       int workers) {
  for (int g : grid)
    if (g < 1) throw std::invalid_argument("transversality_scan: grid sizes must be >= 1");
  TransversalityScan scan;
  scan.grid = grid;
  const std::size_t n =
      static_cast<std::size_t>(grid[0]) * static_cast<std::size_t>(grid[1]) * grid[2];
  scan.cells.resize(n);
  parallel_for(n, workers, [&](std::size_t idx) {
    const int it = static_cast<int>(idx % grid[2]);
    const int iy = static_cast<int>((idx / grid[2]) % grid[1]);
    const int ix = static_cast<int>(idx / (static_cast<std::size_t>(grid[1]) * grid[2]));
    TransversalityCell& cell = scan.cells[idx];
    cell.anchor = {kTwoPi * ix / grid[0], kTwoPi * iy / grid[1], kTwoPi * it / grid[2]};
    auto [s, u] = green_pair_at(surface, model, cell.anchor, gauge, opt, orbit_opt);
    cell.stable = std::move(s);
    cell.unstable = std::move(u);
    cell.valid = cell.stable.converged && cell.unstable.converged &&
                 !cell.stable.conjugate_flag && !cell.unstable.conjugate_flag;
    cell.gap = std::abs(cell.stable.slope - cell.unstable.slope);
  });

  scan.min_gap = std::numeric_limits<double>::infinity();
  scan.max_gap = 0.0;
  for (const auto& cell : scan.cells) {
    if (cell.stable.conjugate_flag || cell.unstable.conjugate_flag) ++scan.conjugate_flagged;
    if (!cell.valid) {
      ++scan.non_converged;
      continue;
    }
    scan.min_gap = std::min(scan.min_gap, cell.gap);
    scan.max_gap = std::max(scan.max_gap, cell.gap);
  }
  if (!std::isfinite(scan.min_gap)) scan.min_gap = 0.0;

  // Empirical continuity: largest slope jump between valid neighbors
  // (periodic in all three axes).
  auto flat = [&](int ix, int iy, int it) {
    const int mx = (ix % grid[0] + grid[0]) % grid[0];
    const int my = (iy % grid[1] + grid[1]) % grid[1];
    const int mt = (it % grid[2] + grid[2]) % grid[2];
    return (static_cast<std::size_t>(mx) * grid[1] + my) * grid[2] + mt;
  };
  double modulus = 0.0;
  for (int ix = 0; ix < grid[0]; ++ix)
    for (int iy = 0; iy < grid[1]; ++iy)
      for (int it = 0; it < grid[2]; ++it) {
        const auto& c0 = scan.cells[flat(ix, iy, it)];
        if (!c0.valid) continue;
        const std::size_t nbs[3] = {flat(ix + 1, iy, it), flat(ix, iy + 1, it),
                                    flat(ix, iy, it + 1)};
        for (std::size_t nb : nbs) {
          const auto& c1 = scan.cells[nb];
          if (!c1.valid) continue;
          modulus = std::max(modulus, std::abs(c0.stable.slope - c1.stable.slope));
          modulus = std::max(modulus, std::abs(c0.unstable.slope - c1.unstable.slope));
        }
      }
  scan.continuity_modulus = modulus;
  return scan;
}

double kappa_w_identity(const ConformalTorus& surface, const IntensityModel& model,
                        std::array<int, 3> grid,
                        const std::function<std::pair<double, double>(const PhasePoint&)>& green_zero,
                        double h, const IntegratorOptions& orbit_opt, int workers) {
  const std::size_t n =
      static_cast<std::size_t>(grid[0]) * static_cast<std::size_t>(grid[1]) * grid[2];
  std::vector<double> residuals(n, 0.0);
  const GaugeSpec zero = GaugeSpec::zero();
  parallel_for(n, workers, [&](std::size_t idx) {
    const int it = static_cast<int>(idx % grid[2]);
    const int iy = static_cast<int>((idx / grid[2]) % grid[1]);
    const int ix = static_cast<int>(idx / (static_cast<std::size_t>(grid[1]) * grid[2]));
    const PhasePoint anchor{kTwoPi * ix / grid[0], kTwoPi * iy / grid[1], kTwoPi * it / grid[2]};
    const OrbitSegment orbit =
        integrate_orbit(surface, model, anchor, -2.0 * h, 2.0 * h, orbit_opt);
    auto w_at = [&](double t) {
      const auto [rs, ru] = green_zero(orbit.state(t));
      return -0.5 * (rs + ru);
    };
    const SigmaCoeffs c0 = sigma_coeffs(orbit, zero, 0.0);
    const auto [rs0, ru0] = green_zero(orbit.state(0.0));
    const double w0 = -0.5 * (rs0 + ru0);
    const double fw = central_diff4(w_at, 0.0, h);
    const double kw = c0.kappa_p + fw + w0 * (w0 - c0.v_lambda);
    const double diff = rs0 - ru0;
    residuals[idx] = std::abs(kw + 0.25 * diff * diff);
  });
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

DominationFit domination_estimate(const ConformalTorus& surface, const IntensityModel& model,
                                  std::span<const PhasePoint> samples, int T,
                                  const GaugeSpec& gauge, const GreenOptions& opt,
                                  const IntegratorOptions& orbit_opt, int workers) {
  if (T < 2) throw std::invalid_argument("domination_estimate: T must be at least 2");
  DominationFit fit;
  fit.per_sample_slope.assign(samples.size(), 0.0);
  fit.log_a.assign(samples.size(), std::vector<double>(static_cast<std::size_t>(T), 0.0));

  parallel_for(samples.size(), workers, [&](std::size_t si) {
    const double t0max = opt.t0_schedule.back();
    const OrbitSegment orbit =
        integrate_orbit(surface, model, samples[si], -t0max, T + t0max, orbit_opt);
    const GreenEstimate gs = green_slope(orbit, GreenSide::Stable, gauge, opt);
    double xs = gs.slope, ys = 1.0;
    if (gs.conjugate_flag) {
      xs = 1.0;
      ys = 0.0;
    }
    // Forward leg: cumulative log |Psi_t xi_s| at integer times.
    std::vector<double> ls(static_cast<std::size_t>(T) + 1, 0.0);
    {
      double x = xs, y = ys, acc = 0.0;
      for (int t = 1; t <= T; ++t) {
        const TransportResult tr = transport_renormalized(orbit, gauge, x, y, t - 1, t,
                                                          opt.renorm_dt, opt.transport);
        acc += tr.log_growth;
        x = tr.x_c;
        y = tr.y_c;
        ls[static_cast<std::size_t>(t)] = acc;
      }
    }
    for (int t = 1; t <= T; ++t) {
      const GreenEstimate gu = green_slope_at_time(orbit, GreenSide::Unstable, gauge, t, opt);
      double xu = gu.slope, yu = 1.0;
      if (gu.conjugate_flag) {
        xu = 1.0;
        yu = 0.0;
      }
      const TransportResult tr =
          transport_renormalized(orbit, gauge, xu, yu, t, 0.0, opt.renorm_dt, opt.transport);
      fit.log_a[si][static_cast<std::size_t>(t - 1)] = ls[static_cast<std::size_t>(t)] + tr.log_growth;
    }
    // Per-sample least squares of log a(t) against t.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int t = 1; t <= T; ++t) {
      const double yv = fit.log_a[si][static_cast<std::size_t>(t - 1)];
      sx += t;
      sy += yv;
      sxx += static_cast<double>(t) * t;
      sxy += t * yv;
    }
    const double nn = static_cast<double>(T);
    fit.per_sample_slope[si] = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  });

  // Fit on the mean curve (equals the mean of per-sample fits on a shared
  // time grid).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int t = 1; t <= T; ++t) {
    double mean = 0.0;
    for (std::size_t si = 0; si < samples.size(); ++si)
      mean += fit.log_a[si][static_cast<std::size_t>(t - 1)];
    mean /= static_cast<double>(samples.size());
    sx += t;
    sy += mean;
    sxx += static_cast<double>(t) * t;
    sxy += t * mean;
  }
  const double nn = static_cast<double>(T);
  fit.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  fit.offset = (sy - fit.slope * sx) / nn;
  return fit;
}

}  // namespace thermo
