// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "levyexp/simd/path_kernel.hpp"

namespace levyexp::simd {
namespace {

// exp(x) for x in [-708.39, 709.78]: x = n ln2 + r with a two-part ln2,
// degree-13 Taylor polynomial in r, then scaling by 2^n through the exponent bits.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.39);
  const __m256d hi = _mm256_set1_pd(709.78);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m256i ni = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

// Inclusive prefix sum across the four lanes.
inline __m256d prefix_sum(__m256d v) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d s1 = _mm256_permute4x64_pd(v, _MM_SHUFFLE(2, 1, 0, 0));
  s1 = _mm256_blend_pd(s1, zero, 0b0001);
  v = _mm256_add_pd(v, s1);
  __m256d s2 = _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 0, 0, 0));
  s2 = _mm256_blend_pd(s2, zero, 0b0011);
  return _mm256_add_pd(v, s2);
}

}  // namespace

double segment_integral_avx2(const double* inc, std::size_t n, double x0, double h,
                             double* x_end) {
  __m256d carry = _mm256_set1_pd(x0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xs = _mm256_add_pd(carry, prefix_sum(_mm256_loadu_pd(inc + k)));
    acc = _mm256_add_pd(acc, exp_pd(xs));
    carry = _mm256_permute4x64_pd(xs, _MM_SHUFFLE(3, 3, 3, 3));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  double x = _mm256_cvtsd_f64(carry);
  for (; k < n; ++k) {
    x += inc[k];
    s += std::exp(x);
  }
  s += 0.5 * std::exp(x0) - 0.5 * std::exp(x);
  if (x_end != nullptr) *x_end = x;
  return h * s;
}

}  // namespace levyexp::simd
