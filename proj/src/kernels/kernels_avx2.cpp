// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has checked CPU support.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace hbvm::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d unord = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = vabs(_mm256_loadu_pd(x + i));
    unord = _mm256_or_pd(unord, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, v);
  }
  bool nan = _mm256_movemask_pd(unord) != 0;
  double r = hmax(m);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    nan |= std::isnan(v);
    r = v > r ? v : r;
  }
  return nan ? std::nan("") : r;
}

double max_abs_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d unord = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = vabs(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    unord = _mm256_or_pd(unord, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, v);
  }
  bool nan = _mm256_movemask_pd(unord) != 0;
  double r = hmax(m);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i] - y[i]);
    nan |= std::isnan(v);
    r = v > r ? v : r;
  }
  return nan ? std::nan("") : r;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void lincomb_avx2(double* out, const double* base, const double* coeffs, std::size_t ncoeffs,
                  const double* blocks, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(base + i);
    for (std::size_t j = 0; j < ncoeffs; ++j)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[j]), _mm256_loadu_pd(blocks + j * n + i), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = base[i];
    for (std::size_t j = 0; j < ncoeffs; ++j) acc += coeffs[j] * blocks[j * n + i];
    out[i] = acc;
  }
}

void symmetric_stencil_avx2(const double* w, std::size_t width, const double* x, double* out,
                            std::size_t n, double scale, bool periodic) {
  if (n < 2 * width + 4) {
    symmetric_stencil_scalar(w, width, x, out, n, scale, periodic);
    return;
  }
  for (std::size_t i = 0; i < width; ++i)
    out[i] = scale * stencil_point(w, width, x, n, i, periodic);

  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const std::size_t end = n - width;
  std::size_t i = width;
  for (; i + 4 <= end; i += 4) {
    __m256d acc = _mm256_mul_pd(w0, _mm256_loadu_pd(x + i));
    for (std::size_t d = 1; d <= width; ++d) {
      const __m256d pair =
          _mm256_add_pd(_mm256_loadu_pd(x + i - d), _mm256_loadu_pd(x + i + d));
      acc = _mm256_fmadd_pd(_mm256_set1_pd(w[d]), pair, acc);
    }
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, acc));
  }
  for (; i < n; ++i) out[i] = scale * stencil_point(w, width, x, n, i, periodic);
}

void gemv_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

void gemv_t_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  std::size_t r = 0;
  // Two rows per sweep halves the traffic on y.
  for (; r + 2 <= rows; r += 2) {
    const double* a0 = a + r * cols;
    const double* a1 = a0 + cols;
    const __m256d x0 = _mm256_set1_pd(x[r]);
    const __m256d x1 = _mm256_set1_pd(x[r + 1]);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d acc = _mm256_loadu_pd(y + c);
      acc = _mm256_fmadd_pd(x0, _mm256_loadu_pd(a0 + c), acc);
      acc = _mm256_fmadd_pd(x1, _mm256_loadu_pd(a1 + c), acc);
      _mm256_storeu_pd(y + c, acc);
    }
    for (; c < cols; ++c) y[c] += x[r] * a0[c] + x[r + 1] * a1[c];
  }
  for (; r < rows; ++r) axpy_avx2(x[r], a + r * cols, y, cols);
}

}  // namespace

const KernelTable kAvx2Table{
    "avx2",       dot_avx2,     max_abs_avx2,           max_abs_diff_avx2,
    axpy_avx2,    lincomb_avx2, symmetric_stencil_avx2, gemv_avx2,
    gemv_t_avx2,
};

}  // namespace hbvm::kernels::detail
