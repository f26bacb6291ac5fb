#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermo {

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 = automatic
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;

  void absorb(const IntegratorStats& o) {
    steps += o.steps;
    rejected += o.rejected;
    rhs_evals += o.rhs_evals;
    rel_tol = o.rel_tol;
    abs_tol = o.abs_tol;
  }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what + " (t reached: " + std::to_string(t_reached) + ")"),
        t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

// Piecewise-quartic interpolant over [0, duration] built from accepted
// Dormand-Prince steps.
template <int N>
class DenseSolution {
 public:
  struct Segment {
    double t0;
    double h;
    std::array<std::array<double, N>, 5> c;  // Horner coefficients
  };

  double duration() const { return duration_; }
  bool stopped() const { return stopped_; }
  const IntegratorStats& stats() const { return stats_; }

  std::array<double, N> eval(double t) const {
    const Segment& seg = segment_for(t);
    const double sigma = (t - seg.t0) / seg.h;
    const double oms = 1.0 - sigma;
    std::array<double, N> out{};
    for (int i = 0; i < N; ++i) {
      out[i] = seg.c[0][i] +
               sigma * (seg.c[1][i] + oms * (seg.c[2][i] + sigma * (seg.c[3][i] + oms * seg.c[4][i])));
    }
    return out;
  }

  std::array<double, N> endpoint() const {
    std::array<double, N> out{};
    const Segment& seg = segments_.back();
    for (int i = 0; i < N; ++i) out[i] = seg.c[0][i] + seg.c[1][i];
    return out;
  }

  // Internal: used by the integrator.
  std::vector<Segment> segments_;
  double duration_ = 0.0;
  bool stopped_ = false;
  IntegratorStats stats_;

 private:
  const Segment& segment_for(double t) const {
    const double slack = 1e-9 * std::max(1.0, duration_);
    if (t < -slack || t > duration_ + slack)
      throw std::out_of_range("dense solution queried outside its time span");
    // Binary search for the segment containing t.
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (segments_[mid].t0 <= t)
        lo = mid;
      else
        hi = mid - 1;
    }
    return segments_[lo];
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                        kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
inline constexpr double kE1 = kB1 - 5179.0 / 57600.0;
inline constexpr double kE3 = kB3 - 7571.0 / 16695.0;
inline constexpr double kE4 = kB4 - 393.0 / 640.0;
inline constexpr double kE5 = kB5 + 92097.0 / 339200.0;
inline constexpr double kE6 = kB6 - 187.0 / 2100.0;
inline constexpr double kE7 = -1.0 / 40.0;
inline constexpr double kC2 = 0.2, kC3 = 0.3, kC4 = 0.8, kC5 = 8.0 / 9.0;
// Dense-output weights for the quartic continuous extension.
inline constexpr double kD1 = -12715105075.0 / 11282082432.0;
inline constexpr double kD3 = 87487479700.0 / 32700410799.0;
inline constexpr double kD4 = -10690763975.0 / 1880347072.0;
inline constexpr double kD5 = 701980252875.0 / 199316789632.0;
inline constexpr double kD6 = -1453857185.0 / 822651844.0;
inline constexpr double kD7 = 69997945.0 / 29380423.0;

}  // namespace detail

// Integrates y' = rhs(t, y) over [0, duration] (duration > 0; run backward
// integrations through a negated right-hand side). When store_dense is
// false only the endpoint is kept (segments_ holds one trivial entry).
// An optional stop predicate, checked at accepted step ends, truncates the
// integration; the solution is then marked stopped().
template <int N, class RHS>
DenseSolution<N> integrate_dense(
    RHS&& rhs, std::array<double, N> y0, double duration, const IntegratorOptions& opt = {},
    bool store_dense = true,
    const std::function<bool(double, const std::array<double, N>&)>& stop = {}) {
  using Vec = std::array<double, N>;
  if (!(duration > 0.0)) throw std::invalid_argument("integrate_dense: duration must be positive");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw std::invalid_argument("integrate_dense: tolerances must be positive");

  DenseSolution<N> sol;
  sol.stats_.rel_tol = opt.rel_tol;
  sol.stats_.abs_tol = opt.abs_tol;

  auto eval_rhs = [&](double t, const Vec& y, Vec& dy) {
    rhs(t, y, dy);
    ++sol.stats_.rhs_evals;
  };

  Vec y = y0, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};
  double t = 0.0;
  eval_rhs(0.0, y, k1);

  auto scaled_norm = [&](const Vec& v, const Vec& ya, const Vec& yb) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double q = v[i] / sc;
      acc += q * q;
    }
    return std::sqrt(acc / N);
  };

  // Initial step heuristic (second-derivative probe).
  double h = opt.initial_step;
  if (!(h > 0.0)) {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, duration);
    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
    eval_rhs(h0, ytmp, k2);
    double d2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      const double q = (k2[i] - k1[i]) / sc;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, duration});
  }
  h = std::min(h, opt.max_step);

  constexpr double kSafe = 0.9, kBeta = 0.04, kExpo = 0.2 - kBeta * 0.75;
  double facold = 1e-4;
  bool last_rejected = false;
  long max_steps = 20'000'000;

  while (t < duration) {
    if (sol.stats_.steps + sol.stats_.rejected > max_steps)
      throw IntegrationError("integration exceeded the step budget", t);
    if (!(h > 1e-14 * std::max(1.0, std::abs(t))) || t + h == t)
      throw IntegrationError("step size underflow", t);
    bool last = false;
    if (t + h >= duration) {
      h = duration - t;
      last = true;
    }

    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * detail::kA21 * k1[i];
    eval_rhs(t + detail::kC2 * h, ytmp, k2);
    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (detail::kA31 * k1[i] + detail::kA32 * k2[i]);
    eval_rhs(t + detail::kC3 * h, ytmp, k3);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA41 * k1[i] + detail::kA42 * k2[i] + detail::kA43 * k3[i]);
    eval_rhs(t + detail::kC4 * h, ytmp, k4);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA51 * k1[i] + detail::kA52 * k2[i] + detail::kA53 * k3[i] +
                            detail::kA54 * k4[i]);
    eval_rhs(t + detail::kC5 * h, ytmp, k5);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA61 * k1[i] + detail::kA62 * k2[i] + detail::kA63 * k3[i] +
                            detail::kA64 * k4[i] + detail::kA65 * k5[i]);
    eval_rhs(t + h, ytmp, k6);
    for (int i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (detail::kB1 * k1[i] + detail::kB3 * k3[i] + detail::kB4 * k4[i] +
                            detail::kB5 * k5[i] + detail::kB6 * k6[i]);
    eval_rhs(t + h, ynew, k7);

    Vec errv{};
    for (int i = 0; i < N; ++i)
      errv[i] = h * (detail::kE1 * k1[i] + detail::kE3 * k3[i] + detail::kE4 * k4[i] +
                     detail::kE5 * k5[i] + detail::kE6 * k6[i] + detail::kE7 * k7[i]);
    const double err = scaled_norm(errv, y, ynew);

    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
    if (err <= 1.0) {
      // accept
      ++sol.stats_.steps;
      if (store_dense || t + h >= duration || stop) {
        typename DenseSolution<N>::Segment seg;
        seg.t0 = t;
        seg.h = h;
        for (int i = 0; i < N; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          seg.c[0][i] = y[i];
          seg.c[1][i] = ydiff;
          seg.c[2][i] = bspl;
          seg.c[3][i] = ydiff - h * k7[i] - bspl;
          seg.c[4][i] = h * (detail::kD1 * k1[i] + detail::kD3 * k3[i] + detail::kD4 * k4[i] +
                             detail::kD5 * k5[i] + detail::kD6 * k6[i] + detail::kD7 * k7[i]);
        }
        if (store_dense)
          sol.segments_.push_back(seg);
        else {
          sol.segments_.assign(1, seg);
        }
      }
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      if (stop && stop(t, y)) {
        sol.duration_ = t;
        sol.stopped_ = true;
        return sol;
      }
      facold = std::max(err, 1e-4);
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(0.1, std::min(5.0, fac / kSafe));
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = std::min(hnew, opt.max_step);
      if (last) break;
    } else {
      ++sol.stats_.rejected;
      h = h / std::min(5.0, fac11 / kSafe);
      last_rejected = true;
    }
  }

  sol.duration_ = duration;
  if (sol.segments_.empty()) throw IntegrationError("no steps taken", 0.0);
  return sol;
}

// Endpoint of duration/n_steps fixed-size Runge-Kutta steps with the 5th
// order weights; for convergence-order measurements.
template <int N, class RHS>
std::array<double, N> integrate_fixed(RHS&& rhs, std::array<double, N> y0, double duration,
                                      int n_steps) {
  using Vec = std::array<double, N>;
  Vec y = y0, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, ytmp{};
  const double h = duration / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    const double t = s * h;
    rhs(t, y, k1);
    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * detail::kA21 * k1[i];
    rhs(t + detail::kC2 * h, ytmp, k2);
    for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (detail::kA31 * k1[i] + detail::kA32 * k2[i]);
    rhs(t + detail::kC3 * h, ytmp, k3);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA41 * k1[i] + detail::kA42 * k2[i] + detail::kA43 * k3[i]);
    rhs(t + detail::kC4 * h, ytmp, k4);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA51 * k1[i] + detail::kA52 * k2[i] + detail::kA53 * k3[i] +
                            detail::kA54 * k4[i]);
    rhs(t + detail::kC5 * h, ytmp, k5);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (detail::kA61 * k1[i] + detail::kA62 * k2[i] + detail::kA63 * k3[i] +
                            detail::kA64 * k4[i] + detail::kA65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < N; ++i)
      y[i] = y[i] + h * (detail::kB1 * k1[i] + detail::kB3 * k3[i] + detail::kB4 * k4[i] +
                         detail::kB5 * k5[i] + detail::kB6 * k6[i]);
  }
  return y;
}

}  // namespace thermo
