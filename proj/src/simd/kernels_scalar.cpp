#include <cmath>
#include <cstddef>

#include "thermo/simd/kernels.hpp"

namespace thermo::kern {
namespace {

void trig_table_scalar(const double* angle, std::size_t n, int deg, double* cj, double* sj) {
  for (std::size_t i = 0; i < n; ++i) {
    cj[i] = 1.0;
    sj[i] = 0.0;
  }
  if (deg < 1) return;
  double* c1 = cj + n;
  double* s1 = sj + n;
  for (std::size_t i = 0; i < n; ++i) {
    c1[i] = std::cos(angle[i]);
    s1[i] = std::sin(angle[i]);
  }
  for (int j = 2; j <= deg; ++j) {
    const double* cp = cj + static_cast<std::size_t>(j - 1) * n;
    const double* cpp = cj + static_cast<std::size_t>(j - 2) * n;
    const double* sp = sj + static_cast<std::size_t>(j - 1) * n;
    const double* spp = sj + static_cast<std::size_t>(j - 2) * n;
    double* co = cj + static_cast<std::size_t>(j) * n;
    double* so = sj + static_cast<std::size_t>(j) * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double two_c1 = 2.0 * c1[i];
      co[i] = two_c1 * cp[i] - cpp[i];
      so[i] = two_c1 * sp[i] - spp[i];
    }
  }
}

void contract2_scalar(std::size_t n, int dx, int dy, const double* cc, const double* cs,
                      const double* sc, const double* ss, const double* cjx, const double* sjx,
                      const double* cky, const double* sky, double* out) {
  const int ny = dy + 1;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= dx; ++j) {
      const double cx = cjx[static_cast<std::size_t>(j) * n + i];
      const double sx = sjx[static_cast<std::size_t>(j) * n + i];
      const int row = j * ny;
      for (int k = 0; k <= dy; ++k) {
        const double cy = cky[static_cast<std::size_t>(k) * n + i];
        const double sy = sky[static_cast<std::size_t>(k) * n + i];
        acc += cx * (cc[row + k] * cy + cs[row + k] * sy) + sx * (sc[row + k] * cy + ss[row + k] * sy);
      }
    }
    out[i] = acc;
  }
}

void theta_combine_scalar(std::size_t n, int deg, const double* a, const double* b,
                          const double* ct, const double* st, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k <= deg; ++k) {
      const std::size_t off = static_cast<std::size_t>(k) * n + i;
      acc += a[off] * ct[off] + b[off] * st[off];
    }
    out[i] = acc;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", trig_table_scalar, contract2_scalar, theta_combine_scalar};
  return k;
}

}  // namespace thermo::kern
