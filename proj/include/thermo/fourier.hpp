#pragma once

#include <span>
#include <string>
#include <vector>

namespace thermo {

enum class TrigBasis { CosCos, CosSin, SinCos, SinSin };

TrigBasis trig_basis_from_tag(const std::string& tag);  // "cc" | "cs" | "sc" | "ss"
const char* trig_basis_tag(TrigBasis b);

// Real trigonometric polynomial on the 2-torus with period 2*pi in both axes:
//
//   F(x, y) = sum_{j,k} cc[j,k] cos(jx)cos(ky) + cs[j,k] cos(jx)sin(ky)
//           + sc[j,k] sin(jx)cos(ky) + ss[j,k] sin(jx)sin(ky)
//
// Partial derivatives are coefficient-table transforms, so they stay in the
// same representation and evaluate exactly. Immutable once built (the
// mutating setters are for construction).
class FourierField2 {
 public:
  static constexpr int kMaxDegree = 32;

  FourierField2() = default;

  void set_coefficient(int j, int k, TrigBasis basis, double value);
  void add_coefficient(int j, int k, TrigBasis basis, double value);
  double coefficient(int j, int k, TrigBasis basis) const;

  int degree_x() const { return degree_x_; }
  int degree_y() const { return degree_y_; }
  bool is_zero() const;

  double operator()(double x, double y) const;

  FourierField2 derivative_x() const;
  FourierField2 derivative_y() const;
  FourierField2 scaled(double factor) const;

  // Batch evaluation through the kernel layer; all spans must have equal
  // length. Trig tables for x and y are built internally.
  void eval_batch(std::span<const double> x, std::span<const double> y,
                  std::span<double> out) const;

  // Contraction against caller-provided trig tables (row stride n); the
  // tables must cover degree_x()/degree_y().
  void contract(std::size_t n, const double* cjx, const double* sjx, const double* cky,
                const double* sky, double* out) const;

  const std::vector<double>& table(TrigBasis b) const;

 private:
  void ensure_degree(int j, int k);

  int degree_x_ = 0;
  int degree_y_ = 0;
  // Row-major (degree_x_+1) x (degree_y_+1); start as the constant 0 field.
  std::vector<double> cc_{0.0}, cs_{0.0}, sc_{0.0}, ss_{0.0};
};

}  // namespace thermo
