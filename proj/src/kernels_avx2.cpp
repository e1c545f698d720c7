#include <immintrin.h>

#include <cmath>

#include "sahr/kernels.hpp"

namespace sahr::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if defined(__x86_64__) || defined(__i386__)

__attribute__((target("avx2"))) void signs_avx2(const HyperplaneBatch& b, const double* x, std::int8_t* out) {
  const std::size_t n = b.n, m = b.m;
  const double factor = static_cast<double>(m + 8) * 0x1p-50;
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d vfactor = _mm256_set1_pd(factor);
  const __m256d tiny = _mm256_set1_pd(1e-280);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_loadu_pd(&b.coef[i]);
    __m256d mag = _mm256_andnot_pd(sign_mask, s);
    for (std::size_t k = 1; k <= m; ++k) {
      __m256d p = _mm256_mul_pd(_mm256_loadu_pd(&b.coef[k * n + i]), _mm256_set1_pd(x[k - 1]));
      s = _mm256_add_pd(s, p);
      mag = _mm256_add_pd(mag, _mm256_andnot_pd(sign_mask, p));
    }
    __m256d bound = _mm256_mul_pd(mag, vfactor);
    __m256d big = _mm256_cmp_pd(mag, tiny, _CMP_GT_OQ);
    __m256d pos = _mm256_and_pd(big, _mm256_cmp_pd(s, bound, _CMP_GT_OQ));
    __m256d neg = _mm256_and_pd(big, _mm256_cmp_pd(_mm256_xor_pd(s, sign_mask), bound, _CMP_GT_OQ));
    int pm = _mm256_movemask_pd(pos), nm = _mm256_movemask_pd(neg);
    for (int lane = 0; lane < 4; ++lane)
      out[i + lane] = (pm >> lane & 1) ? 1 : (nm >> lane & 1) ? -1 : kUncertain;
  }
  // Tail: same operation order as the vector body.
  for (; i < n; ++i) {
    double s = b.coef[i];
    double mag = std::fabs(s);
    for (std::size_t k = 1; k <= m; ++k) {
      double p = b.coef[k * n + i] * x[k - 1];
      s = s + p;
      mag = mag + std::fabs(p);
    }
    double bound = mag * factor;
    if (mag > 1e-280 && s > bound)
      out[i] = 1;
    else if (mag > 1e-280 && -s > bound)
      out[i] = -1;
    else
      out[i] = kUncertain;
  }
}

#else

void signs_avx2(const HyperplaneBatch& b, const double* x, std::int8_t* out) { signs_scalar(b, x, out); }

#endif

}  // namespace sahr::kernels
