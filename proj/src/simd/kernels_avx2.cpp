// AVX2 variants of the batch trig kernels. Lane-per-point vectorization with
// the exact operation order of the scalar reference: mul/add/sub only (no
// FMA), so results are bitwise identical to the scalar path.

#include "thermo/simd/kernels.hpp"

#if defined(THERMO_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace thermo::kern {
namespace {

void trig_table_avx2(const double* angle, std::size_t n, int deg, double* cj, double* sj) {
  for (std::size_t i = 0; i < n; ++i) {
    cj[i] = 1.0;
    sj[i] = 0.0;
  }
  if (deg < 1) return;
  double* c1 = cj + n;
  double* s1 = sj + n;
  // libm setup row; identical calls to the scalar path.
  for (std::size_t i = 0; i < n; ++i) {
    c1[i] = std::cos(angle[i]);
    s1[i] = std::sin(angle[i]);
  }
  const __m256d two = _mm256_set1_pd(2.0);
  for (int j = 2; j <= deg; ++j) {
    const double* cp = cj + static_cast<std::size_t>(j - 1) * n;
    const double* cpp = cj + static_cast<std::size_t>(j - 2) * n;
    const double* sp = sj + static_cast<std::size_t>(j - 1) * n;
    const double* spp = sj + static_cast<std::size_t>(j - 2) * n;
    double* co = cj + static_cast<std::size_t>(j) * n;
    double* so = sj + static_cast<std::size_t>(j) * n;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d tc1 = _mm256_mul_pd(two, _mm256_loadu_pd(c1 + i));
      _mm256_storeu_pd(co + i, _mm256_sub_pd(_mm256_mul_pd(tc1, _mm256_loadu_pd(cp + i)),
                                             _mm256_loadu_pd(cpp + i)));
      _mm256_storeu_pd(so + i, _mm256_sub_pd(_mm256_mul_pd(tc1, _mm256_loadu_pd(sp + i)),
                                             _mm256_loadu_pd(spp + i)));
    }
    for (; i < n; ++i) {
      const double two_c1 = 2.0 * c1[i];
      co[i] = two_c1 * cp[i] - cpp[i];
      so[i] = two_c1 * sp[i] - spp[i];
    }
  }
}

void contract2_avx2(std::size_t n, int dx, int dy, const double* cc, const double* cs,
                    const double* sc, const double* ss, const double* cjx, const double* sjx,
                    const double* cky, const double* sky, double* out) {
  const int ny = dy + 1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j <= dx; ++j) {
      const __m256d cx = _mm256_loadu_pd(cjx + static_cast<std::size_t>(j) * n + i);
      const __m256d sx = _mm256_loadu_pd(sjx + static_cast<std::size_t>(j) * n + i);
      const int row = j * ny;
      for (int k = 0; k <= dy; ++k) {
        const __m256d cy = _mm256_loadu_pd(cky + static_cast<std::size_t>(k) * n + i);
        const __m256d sy = _mm256_loadu_pd(sky + static_cast<std::size_t>(k) * n + i);
        const __m256d tc = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(cc[row + k]), cy),
                                         _mm256_mul_pd(_mm256_set1_pd(cs[row + k]), sy));
        const __m256d ts = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(sc[row + k]), cy),
                                         _mm256_mul_pd(_mm256_set1_pd(ss[row + k]), sy));
        acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(cx, tc), _mm256_mul_pd(sx, ts)));
      }
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
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

void theta_combine_avx2(std::size_t n, int deg, const double* a, const double* b, const double* ct,
                        const double* st, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k <= deg; ++k) {
      const std::size_t off = static_cast<std::size_t>(k) * n + i;
      const __m256d term =
          _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a + off), _mm256_loadu_pd(ct + off)),
                        _mm256_mul_pd(_mm256_loadu_pd(b + off), _mm256_loadu_pd(st + off)));
      acc = _mm256_add_pd(acc, term);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k <= deg; ++k) {
      const std::size_t off = static_cast<std::size_t>(k) * n + i;
      acc += a[off] * ct[off] + b[off] * st[off];
    }
    out[i] = acc;
  }
}

}  // namespace

const Kernels* avx2_kernels_impl() {
  static const Kernels k{"avx2", trig_table_avx2, contract2_avx2, theta_combine_avx2};
  return &k;
}

}  // namespace thermo::kern

#endif  // THERMO_HAVE_AVX2
