#include "thermo/batch.hpp"

#include <cmath>
#include <stdexcept>

#include "thermo/simd/kernels.hpp"

namespace thermo {

namespace {
constexpr std::size_t kChunk = 2048;
}

void SurfaceModelBatch::ModelJets::resize(std::size_t n) {
  for (auto* v : {&lam, &lam_t, &lam_tt, &lam_x, &lam_y, &lam_tx, &lam_ty}) v->resize(n);
}

SurfaceModelBatch::SurfaceModelBatch(const ConformalTorus& surface, const IntensityModel& model)
    : surface_(&surface), model_(&model) {
  deg_x_ = std::max(surface.f().degree_x(), model.max_spatial_degree_x());
  deg_y_ = std::max(surface.f().degree_y(), model.max_spatial_degree_y());
}

void SurfaceModelBatch::model_jets(const IntensityModel& m, std::size_t n, ModelJets& out) {
  const auto& kern = kern::active();
  const int K = m.theta_degree();
  const std::size_t rows = static_cast<std::size_t>(K) + 1;
  out.resize(n);
  fld_a_.resize(rows * n);
  fld_b_.resize(rows * n);
  std::vector<double>& A = fld_a_;
  std::vector<double>& B = fld_b_;

  auto contract_all = [&](const FourierField2& (IntensityModel::*get)(int) const,
                          std::vector<double>& dst) {
    for (int k = 0; k <= K; ++k)
      (m.*get)(k).contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(),
                           dst.data() + static_cast<std::size_t>(k) * n);
  };

  // Value and theta derivatives from the a_k, b_k contractions.
  contract_all(&IntensityModel::cos_field, A);
  contract_all(&IntensityModel::sin_field, B);
  {
    std::vector<double> At(rows * n), Bt(rows * n);
    for (int k = 0; k <= K; ++k) {
      const double kk = k;
      const std::size_t off = static_cast<std::size_t>(k) * n;
      for (std::size_t i = 0; i < n; ++i) {
        At[off + i] = kk * B[off + i];   // d/dtheta: a cos -> -a k sin, b sin -> b k cos
        Bt[off + i] = -kk * A[off + i];
      }
    }
    kern.theta_combine(n, K, A.data(), B.data(), cth_.data(), sth_.data(), out.lam.data());
    kern.theta_combine(n, K, At.data(), Bt.data(), cth_.data(), sth_.data(), out.lam_t.data());
    for (int k = 0; k <= K; ++k) {
      const double k2 = static_cast<double>(k) * k;
      const std::size_t off = static_cast<std::size_t>(k) * n;
      for (std::size_t i = 0; i < n; ++i) {
        At[off + i] = -k2 * A[off + i];
        Bt[off + i] = -k2 * B[off + i];
      }
    }
    kern.theta_combine(n, K, At.data(), Bt.data(), cth_.data(), sth_.data(), out.lam_tt.data());
  }

  // Spatial partials through the model's precomputed derivative tables.
  std::vector<double> Ax(rows * n), Bx(rows * n);
  for (int k = 0; k <= K; ++k) {
    m.cos_field_dx(k).contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(),
                               Ax.data() + static_cast<std::size_t>(k) * n);
    m.sin_field_dx(k).contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(),
                               Bx.data() + static_cast<std::size_t>(k) * n);
  }
  kern.theta_combine(n, K, Ax.data(), Bx.data(), cth_.data(), sth_.data(), out.lam_x.data());
  {
    std::vector<double> At(rows * n), Bt(rows * n);
    for (int k = 0; k <= K; ++k) {
      const double kk = k;
      const std::size_t off = static_cast<std::size_t>(k) * n;
      for (std::size_t i = 0; i < n; ++i) {
        At[off + i] = kk * Bx[off + i];
        Bt[off + i] = -kk * Ax[off + i];
      }
    }
    kern.theta_combine(n, K, At.data(), Bt.data(), cth_.data(), sth_.data(), out.lam_tx.data());
  }
  for (int k = 0; k <= K; ++k) {
    m.cos_field_dy(k).contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(),
                               Ax.data() + static_cast<std::size_t>(k) * n);
    m.sin_field_dy(k).contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(),
                               Bx.data() + static_cast<std::size_t>(k) * n);
  }
  kern.theta_combine(n, K, Ax.data(), Bx.data(), cth_.data(), sth_.data(), out.lam_y.data());
  {
    std::vector<double> At(rows * n), Bt(rows * n);
    for (int k = 0; k <= K; ++k) {
      const double kk = k;
      const std::size_t off = static_cast<std::size_t>(k) * n;
      for (std::size_t i = 0; i < n; ++i) {
        At[off + i] = kk * Bx[off + i];
        Bt[off + i] = -kk * Ax[off + i];
      }
    }
    kern.theta_combine(n, K, At.data(), Bt.data(), cth_.data(), sth_.data(), out.lam_ty.data());
  }
}

void SurfaceModelBatch::eval_chunk(const GaugeSpec& gauge, std::span<const double> x,
                                   std::span<const double> y, std::span<const double> theta,
                                   bool want_weight) {
  const std::size_t n = x.size();
  const auto& kern = kern::active();
  const bool custom = gauge.kind() == GaugeSpec::Kind::Custom;
  int dx = deg_x_, dy = deg_y_;
  int tdeg = std::max(1, model_->theta_degree());
  if (custom) {
    dx = std::max(dx, gauge.custom_model()->max_spatial_degree_x());
    dy = std::max(dy, gauge.custom_model()->max_spatial_degree_y());
    tdeg = std::max(tdeg, gauge.custom_model()->theta_degree());
  }

  cjx_.resize(static_cast<std::size_t>(dx + 1) * n);
  sjx_.resize(cjx_.size());
  cky_.resize(static_cast<std::size_t>(dy + 1) * n);
  sky_.resize(cky_.size());
  cth_.resize(static_cast<std::size_t>(tdeg + 1) * n);
  sth_.resize(cth_.size());
  kern.trig_table(x.data(), n, dx, cjx_.data(), sjx_.data());
  kern.trig_table(y.data(), n, dy, cky_.data(), sky_.data());
  kern.trig_table(theta.data(), n, tdeg, cth_.data(), sth_.data());

  for (auto* v : {&f_, &fx_, &fy_, &fxx_, &fyy_, &cf_, &kg_, &hl_, &fvl_, &base_, &kp_, &bigk_,
                  &ktilde_, &weight_})
    v->resize(n);
  surface_->f().contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(), f_.data());
  surface_->f_x().contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(), fx_.data());
  surface_->f_y().contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(), fy_.data());
  surface_->f_xx().contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(), fxx_.data());
  surface_->f_yy().contract(n, cjx_.data(), sjx_.data(), cky_.data(), sky_.data(), fyy_.data());

  model_jets(*model_, n, lamj_);
  if (custom) model_jets(*gauge.custom_model(), n, pj_);

  const double* c1 = cth_.data() + n;
  const double* s1 = sth_.data() + n;
  for (std::size_t i = 0; i < n; ++i) {
    const double cf = std::exp(-f_[i]);
    cf_[i] = cf;
    const double c = c1[i], s = s1[i];
    const double lam = lamj_.lam[i], lt = lamj_.lam_t[i], ltt = lamj_.lam_tt[i];
    const double xtheta = -fx_[i] * s + fy_[i] * c;
    kg_[i] = -(cf * cf) * (fxx_[i] + fyy_[i]);
    hl_[i] = cf * (-s * lamj_.lam_x[i] + c * lamj_.lam_y[i] - (fx_[i] * c + fy_[i] * s) * lt);
    const double xvl = cf * (c * lamj_.lam_tx[i] + s * lamj_.lam_ty[i] + xtheta * ltt);
    fvl_[i] = xvl + lam * ltt;
    base_[i] = kg_[i] - hl_[i] + lam * lam;
    bigk_[i] = base_[i] + fvl_[i];
    ktilde_[i] = base_[i] + 0.5 * fvl_[i] + 0.5 * lt * (0.5 * lt - lt);
    double p = 0.0, fp = 0.0;
    switch (gauge.kind()) {
      case GaugeSpec::Kind::Zero: break;
      case GaugeSpec::Kind::ScaledVLambda:
        p = gauge.factor() * lt;
        fp = gauge.factor() * fvl_[i];
        break;
      case GaugeSpec::Kind::Custom: {
        p = pj_.lam[i];
        const double xp = cf * (c * pj_.lam_x[i] + s * pj_.lam_y[i] + xtheta * pj_.lam_t[i]);
        fp = xp + lam * pj_.lam_t[i];
        break;
      }
    }
    kp_[i] = base_[i] + fp + p * (p - lt);
    if (want_weight) weight_[i] = std::exp(2.0 * f_[i]);
  }
}

void SurfaceModelBatch::curvatures(const GaugeSpec& gauge, std::span<const double> x,
                                   std::span<const double> y, std::span<const double> theta,
                                   std::span<double> kappa_p, std::span<double> big_k,
                                   std::span<double> kappa_tilde) {
  const std::size_t n = x.size();
  if (y.size() != n || theta.size() != n)
    throw std::invalid_argument("curvatures: span sizes must match");
  for (std::size_t i0 = 0; i0 < n; i0 += kChunk) {
    const std::size_t m = std::min(kChunk, n - i0);
    eval_chunk(gauge, x.subspan(i0, m), y.subspan(i0, m), theta.subspan(i0, m), false);
    for (std::size_t i = 0; i < m; ++i) {
      if (!kappa_p.empty()) kappa_p[i0 + i] = kp_[i];
      if (!big_k.empty()) big_k[i0 + i] = bigk_[i];
      if (!kappa_tilde.empty()) kappa_tilde[i0 + i] = ktilde_[i];
    }
  }
}

void SurfaceModelBatch::hopf_integrands(const GaugeSpec& gauge, std::span<const double> x,
                                        std::span<const double> y, std::span<const double> theta,
                                        std::span<double> kappa_p_w, std::span<double> gauge_term_w,
                                        std::span<double> magnetic_term_w,
                                        std::span<double> weight) {
  const std::size_t n = x.size();
  if (y.size() != n || theta.size() != n)
    throw std::invalid_argument("hopf_integrands: span sizes must match");
  for (std::size_t i0 = 0; i0 < n; i0 += kChunk) {
    const std::size_t m = std::min(kChunk, n - i0);
    eval_chunk(gauge, x.subspan(i0, m), y.subspan(i0, m), theta.subspan(i0, m), true);
    for (std::size_t i = 0; i < m; ++i) {
      const double lt = lamj_.lam_t[i];
      const double lam = lamj_.lam[i];
      double p = 0.0;
      switch (gauge.kind()) {
        case GaugeSpec::Kind::Zero: break;
        case GaugeSpec::Kind::ScaledVLambda: p = gauge.factor() * lt; break;
        case GaugeSpec::Kind::Custom: p = pj_.lam[i]; break;
      }
      const double w = weight_[i];
      if (!kappa_p_w.empty()) kappa_p_w[i0 + i] = kp_[i] * w;
      if (!gauge_term_w.empty()) gauge_term_w[i0 + i] = (p - lt) * (p - lt) * w;
      if (!magnetic_term_w.empty()) magnetic_term_w[i0 + i] = (lam * lam - lt * lt) * w;
      if (!weight.empty()) weight[i0 + i] = w;
    }
  }
}

}  // namespace thermo
