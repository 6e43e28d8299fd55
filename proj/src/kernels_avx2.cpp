// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "sharpstep/kernels.hpp"

namespace sharpstep::kernels {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double SquaredNorm(const double* a, std::size_t n) { return Dot(a, a, n); }

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    i += 4;
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Elementwise kernels avoid FMA so that they round exactly like the scalar
// reference.
void Axpy(double s, const double* x, double* y, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

void Axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void SoftThreshold(const double* v, double theta, double* out, std::size_t n) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d vtheta = _mm256_set1_pd(theta);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(sign_bit, x), vtheta);
    const __m256d keep = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    const __m256d signed_mag = _mm256_or_pd(mag, _mm256_and_pd(sign_bit, x));
    _mm256_storeu_pd(out + i, _mm256_and_pd(keep, signed_mag));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(v[i]) - theta;
    out[i] = m > 0.0 ? std::copysign(m, v[i]) : 0.0;
  }
}

void Gemv(const double* a, const double* x, double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) out[r] = Dot(a + r * cols, x, cols);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", Dot,   SquaredNorm,   SquaredDistance,
                                 Axpy,   Axpby, SoftThreshold, Gemv};
  return table;
}

}  // namespace sharpstep::kernels
