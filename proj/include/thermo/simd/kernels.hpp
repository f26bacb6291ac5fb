#pragma once

#include <cstddef>

namespace thermo::kern {

// Batch kernels behind the trigonometric-polynomial evaluators. Tables are
// row-major with row stride n: row j of cj holds cos(j * angle[i]).
//
// Every implementation must perform the same per-element operation sequence
// as the scalar reference (no FMA contraction, identical accumulation
// order), so variants agree bit-for-bit and outputs do not depend on the
// dispatch decision beyond which code path ran.
struct Kernels {
  const char* name;

  // Fill cj[j*n+i] = cos(j*angle[i]), sj[j*n+i] = sin(j*angle[i]) for
  // j = 0..deg. Row 1 uses libm; higher rows use the Chebyshev recurrence
  // c_j = 2 c_1 c_{j-1} - c_{j-2} (same for s_j).
  void (*trig_table)(const double* angle, std::size_t n, int deg, double* cj, double* sj);

  // out[i] = sum_{j<=dx, k<=dy} cc[j,k] cjx[j,i] cky[k,i] + cs[j,k] cjx[j,i] sky[k,i]
  //        + sc[j,k] sjx[j,i] cky[k,i] + ss[j,k] sjx[j,i] sky[k,i]
  // Coefficient tables are row-major (dx+1) x (dy+1).
  void (*contract2)(std::size_t n, int dx, int dy, const double* cc, const double* cs,
                    const double* sc, const double* ss, const double* cjx, const double* sjx,
                    const double* cky, const double* sky, double* out);

  // out[i] = sum_{k<=deg} a[k*n+i]*ct[k*n+i] + b[k*n+i]*st[k*n+i]
  void (*theta_combine)(std::size_t n, int deg, const double* a, const double* b,
                        const double* ct, const double* st, double* out);
};

const Kernels& scalar_kernels();

// AVX2 variant, or nullptr when unavailable (not compiled in, or the CPU
// lacks the feature).
const Kernels* avx2_kernels();

// Kernel set selected at startup: AVX2 when the CPU supports it, otherwise
// scalar. THERMOLAB_SIMD=scalar|avx2|auto overrides.
const Kernels& active();

}  // namespace thermo::kern
