#if defined(__x86_64__)

#include <immintrin.h>

#include "gspec/kernels.hpp"

namespace gspec::kern {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double nrm2sq_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += a[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void spmv_avx2(const CsrView& a, const double* x, double* y) {
  for (std::int32_t r = 0; r < a.rows; ++r) {
    const std::int32_t begin = a.rowptr[r];
    const std::int32_t end = a.rowptr[r + 1];
    __m256d vacc = _mm256_setzero_pd();
    std::int32_t k = begin;
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.colidx + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      vacc = _mm256_fmadd_pd(_mm256_loadu_pd(a.values + k), xv, vacc);
    }
    double acc = hsum(vacc);
    for (; k < end; ++k) acc += a.values[k] * x[a.colidx[k]];
    y[r] = acc;
  }
}

void hermite_batch_avx2(int n, const double* t, double* out, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d tv = _mm256_loadu_pd(t + i);
    if (n == 0) {
      _mm256_storeu_pd(out + i, _mm256_set1_pd(1.0));
      continue;
    }
    __m256d hm1 = _mm256_set1_pd(1.0);
    __m256d h = tv;
    for (int k = 1; k < n; ++k) {
      const __m256d next =
          _mm256_fmsub_pd(tv, h, _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(k)), hm1));
      hm1 = h;
      h = next;
    }
    _mm256_storeu_pd(out + i, h);
  }
  for (; i < len; ++i) {
    if (n == 0) {
      out[i] = 1.0;
      continue;
    }
    double hm1 = 1.0;
    double h = t[i];
    for (int k = 1; k < n; ++k) {
      const double next = t[i] * h - static_cast<double>(k) * hm1;
      hm1 = h;
      h = next;
    }
    out[i] = h;
  }
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{"avx2",     dot_avx2,  nrm2sq_avx2, sum_avx2,
                         axpy_avx2,  scal_avx2, spmv_avx2,   hermite_batch_avx2};
  return table;
}

}  // namespace gspec::kern

#endif  // __x86_64__
