#include "thermo/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "thermo/simd/kernels.hpp"

namespace thermo {

TrigBasis trig_basis_from_tag(const std::string& tag) {
  if (tag == "cc") return TrigBasis::CosCos;
  if (tag == "cs") return TrigBasis::CosSin;
  if (tag == "sc") return TrigBasis::SinCos;
  if (tag == "ss") return TrigBasis::SinSin;
  throw std::invalid_argument("unknown trig basis tag '" + tag + "' (expected cc|cs|sc|ss)");
}

const char* trig_basis_tag(TrigBasis b) {
  switch (b) {
    case TrigBasis::CosCos: return "cc";
    case TrigBasis::CosSin: return "cs";
    case TrigBasis::SinCos: return "sc";
    case TrigBasis::SinSin: return "ss";
  }
  return "?";
}

const std::vector<double>& FourierField2::table(TrigBasis b) const {
  switch (b) {
    case TrigBasis::CosCos: return cc_;
    case TrigBasis::CosSin: return cs_;
    case TrigBasis::SinCos: return sc_;
    case TrigBasis::SinSin: return ss_;
  }
  return cc_;
}

void FourierField2::ensure_degree(int j, int k) {
  if (j < 0 || k < 0) throw std::invalid_argument("Fourier mode indices must be non-negative");
  if (j > kMaxDegree || k > kMaxDegree)
    throw std::invalid_argument("Fourier degree exceeds supported maximum of 32");
  if (j <= degree_x_ && k <= degree_y_) return;
  const int nx = std::max(j, degree_x_);
  const int ny = std::max(k, degree_y_);
  auto grow = [&](std::vector<double>& t) {
    std::vector<double> g(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
    for (int a = 0; a <= degree_x_; ++a)
      for (int b = 0; b <= degree_y_; ++b)
        g[static_cast<std::size_t>(a) * (ny + 1) + b] = t[static_cast<std::size_t>(a) * (degree_y_ + 1) + b];
    t = std::move(g);
  };
  grow(cc_);
  grow(cs_);
  grow(sc_);
  grow(ss_);
  degree_x_ = nx;
  degree_y_ = ny;
}

void FourierField2::set_coefficient(int j, int k, TrigBasis basis, double value) {
  ensure_degree(j, k);
  auto& t = const_cast<std::vector<double>&>(table(basis));
  t[static_cast<std::size_t>(j) * (degree_y_ + 1) + k] = value;
}

void FourierField2::add_coefficient(int j, int k, TrigBasis basis, double value) {
  ensure_degree(j, k);
  auto& t = const_cast<std::vector<double>&>(table(basis));
  t[static_cast<std::size_t>(j) * (degree_y_ + 1) + k] += value;
}

double FourierField2::coefficient(int j, int k, TrigBasis basis) const {
  if (j > degree_x_ || k > degree_y_ || j < 0 || k < 0) return 0.0;
  return table(basis)[static_cast<std::size_t>(j) * (degree_y_ + 1) + k];
}

bool FourierField2::is_zero() const {
  for (const auto* t : {&cc_, &cs_, &sc_, &ss_})
    for (double v : *t)
      if (v != 0.0) return false;
  return true;
}

double FourierField2::operator()(double x, double y) const {
  // Stack trig tables, same recurrence and contraction order as the batch
  // kernels so single-point and batch evaluation agree bitwise.
  double cjx[kMaxDegree + 1], sjx[kMaxDegree + 1], cky[kMaxDegree + 1], sky[kMaxDegree + 1];
  kern::scalar_kernels().trig_table(&x, 1, degree_x_, cjx, sjx);
  kern::scalar_kernels().trig_table(&y, 1, degree_y_, cky, sky);
  double out = 0.0;
  kern::scalar_kernels().contract2(1, degree_x_, degree_y_, cc_.data(), cs_.data(), sc_.data(),
                                   ss_.data(), cjx, sjx, cky, sky, &out);
  return out;
}

FourierField2 FourierField2::derivative_x() const {
  FourierField2 d;
  for (int j = 0; j <= degree_x_; ++j)
    for (int k = 0; k <= degree_y_; ++k) {
      const double jc = static_cast<double>(j);
      if (double v = coefficient(j, k, TrigBasis::CosCos); v != 0.0 && j > 0)
        d.add_coefficient(j, k, TrigBasis::SinCos, -jc * v);
      if (double v = coefficient(j, k, TrigBasis::CosSin); v != 0.0 && j > 0)
        d.add_coefficient(j, k, TrigBasis::SinSin, -jc * v);
      if (double v = coefficient(j, k, TrigBasis::SinCos); v != 0.0)
        d.add_coefficient(j, k, TrigBasis::CosCos, jc * v);
      if (double v = coefficient(j, k, TrigBasis::SinSin); v != 0.0)
        d.add_coefficient(j, k, TrigBasis::CosSin, jc * v);
    }
  return d;
}

FourierField2 FourierField2::derivative_y() const {
  FourierField2 d;
  for (int j = 0; j <= degree_x_; ++j)
    for (int k = 0; k <= degree_y_; ++k) {
      const double kc = static_cast<double>(k);
      if (double v = coefficient(j, k, TrigBasis::CosCos); v != 0.0 && k > 0)
        d.add_coefficient(j, k, TrigBasis::CosSin, -kc * v);
      if (double v = coefficient(j, k, TrigBasis::SinCos); v != 0.0 && k > 0)
        d.add_coefficient(j, k, TrigBasis::SinSin, -kc * v);
      if (double v = coefficient(j, k, TrigBasis::CosSin); v != 0.0)
        d.add_coefficient(j, k, TrigBasis::CosCos, kc * v);
      if (double v = coefficient(j, k, TrigBasis::SinSin); v != 0.0)
        d.add_coefficient(j, k, TrigBasis::SinCos, kc * v);
    }
  return d;
}

FourierField2 FourierField2::scaled(double factor) const {
  FourierField2 s = *this;
  for (auto* t : {&s.cc_, &s.cs_, &s.sc_, &s.ss_})
    for (double& v : *t) v *= factor;
  return s;
}

void FourierField2::eval_batch(std::span<const double> x, std::span<const double> y,
                               std::span<double> out) const {
  const std::size_t n = x.size();
  if (y.size() != n || out.size() != n)
    throw std::invalid_argument("eval_batch: span sizes must match");
  const auto& k = kern::active();
  std::vector<double> cjx(static_cast<std::size_t>(degree_x_ + 1) * n);
  std::vector<double> sjx(cjx.size());
  std::vector<double> cky(static_cast<std::size_t>(degree_y_ + 1) * n);
  std::vector<double> sky(cky.size());
  k.trig_table(x.data(), n, degree_x_, cjx.data(), sjx.data());
  k.trig_table(y.data(), n, degree_y_, cky.data(), sky.data());
  k.contract2(n, degree_x_, degree_y_, cc_.data(), cs_.data(), sc_.data(), ss_.data(), cjx.data(),
              sjx.data(), cky.data(), sky.data(), out.data());
}

void FourierField2::contract(std::size_t n, const double* cjx, const double* sjx, const double* cky,
                             const double* sky, double* out) const {
  kern::active().contract2(n, degree_x_, degree_y_, cc_.data(), cs_.data(), sc_.data(), ss_.data(),
                           cjx, sjx, cky, sky, out);
}

}  // namespace thermo
