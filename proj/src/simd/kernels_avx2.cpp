#include "kernels_impl.hpp"

#if defined(PROTORECON_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace protorecon::simd::detail {

namespace {

// Cephes-style exp: x = k*ln2 + r with a two-part ln2, then the (3,4)
// rational approximation on |r| <= ln2/2. Arguments below the smallest
// normal exponent flush to zero instead of producing subnormals.
constexpr double kLog2e = 1.4426950408889634073599;
constexpr double kLn2Hi = 6.93145751953125e-1;
constexpr double kLn2Lo = 1.42860682030941723212e-6;
constexpr double kExpLo = -708.39641853226410622;
constexpr double kExpHi = 709.43613930310391424;

constexpr double kP0 = 1.26177193074810590878e-4;
constexpr double kP1 = 3.02994407707441961300e-2;
constexpr double kP2 = 9.99999999999999999910e-1;
constexpr double kQ0 = 3.00198505138664455042e-6;
constexpr double kQ1 = 2.52448340349684104192e-3;
constexpr double kQ2 = 2.27265548208155028766e-1;
constexpr double kQ3 = 2.00000000000000000009e0;

inline __m256d exp_pd(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(kExpLo), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(kExpLo));
  x = _mm256_min_pd(x, _mm256_set1_pd(kExpHi));

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(kP0), rr, _mm256_set1_pd(kP1));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(kP2));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(_mm256_set1_pd(kQ0), rr, _mm256_set1_pd(kQ1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kQ2));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kQ3));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  // 2^k assembled in the exponent field; k is in [-1022, 1024].
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i bits = _mm256_cvtepi32_epi64(k32);
  __m256i bias = _mm256_set1_epi64x(1023);
  // k = 1024 would overflow the field; split it as 2^(k-1) * 2.
  const __m256i k_is_max = _mm256_cmpeq_epi64(bits, _mm256_set1_epi64x(1024));
  bits = _mm256_sub_epi64(bits, _mm256_and_si256(k_is_max, _mm256_set1_epi64x(1)));
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, bias), 52);
  __m256d scale = _mm256_castsi256_pd(bits);
  e = _mm256_mul_pd(e, scale);
  e = _mm256_blendv_pd(e, _mm256_mul_pd(e, _mm256_set1_pd(2.0)), _mm256_castsi256_pd(k_is_max));

  return _mm256_andnot_pd(underflow, e);
}

inline double scalar_exp_tail(double v) {
  alignas(32) double buf[4] = {v, 0.0, 0.0, 0.0};
  _mm256_store_pd(buf, exp_pd(_mm256_load_pd(buf)));
  return buf[0];
}

void gaussian_activations_avx2(double x, const double* w, const double* b, double* out,
                               std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d z = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), vx, _mm256_loadu_pd(b + j));
    const __m256d nz2 = _mm256_mul_pd(_mm256_xor_pd(z, _mm256_set1_pd(-0.0)), z);
    _mm256_storeu_pd(out + j, exp_pd(nz2));
  }
  for (; j < n; ++j) {
    const double z = std::fma(w[j], x, b[j]);
    out[j] = scalar_exp_tail(-z * z);
  }
}

void gaussian_distance_avx2(double center, const double* xs, double inv_tau, double* out,
                            std::size_t n) {
  const __m256d vc = _mm256_set1_pd(center);
  const __m256d vneg_inv_tau = _mm256_set1_pd(-inv_tau);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(vc, _mm256_loadu_pd(xs + k));
    _mm256_storeu_pd(out + k, exp_pd(_mm256_mul_pd(_mm256_mul_pd(d, d), vneg_inv_tau)));
  }
  for (; k < n; ++k) {
    const double d = center - xs[k];
    out[k] = scalar_exp_tail(d * d * -inv_tau);
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  double total = _mm_cvtsd_f64(s);
  for (; i < n; ++i) total = std::fma(a[i], b[i], total);
  return total;
}

void exp_avx2(const double* in, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(in + i)));
  for (; i < n; ++i) out[i] = scalar_exp_tail(in[i]);
}

}  // namespace

const KernelTable kAvx2Table{
    Backend::avx2,
    &gaussian_activations_avx2,
    &gaussian_distance_avx2,
    &dot_avx2,
    &exp_avx2,
};

}  // namespace protorecon::simd::detail

#endif  // PROTORECON_HAVE_AVX2
