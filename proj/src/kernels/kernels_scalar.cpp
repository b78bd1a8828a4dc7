#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace hbvm::kernels::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

// NaN anywhere in the input yields NaN, so callers can detect divergence.
double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  bool nan = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    nan |= std::isnan(v);
    m = v > m ? v : m;
  }
  return nan ? std::nan("") : m;
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  bool nan = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i] - y[i]);
    nan |= std::isnan(v);
    m = v > m ? v : m;
  }
  return nan ? std::nan("") : m;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb_scalar(double* out, const double* base, const double* coeffs, std::size_t ncoeffs,
                    const double* blocks, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = base[i];
  for (std::size_t j = 0; j < ncoeffs; ++j) {
    const double c = coeffs[j];
    const double* b = blocks + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * b[i];
  }
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], a + r * cols, y, cols);
}

}  // namespace

double stencil_point(const double* w, std::size_t width, const double* x, std::size_t n,
                     std::size_t i, bool periodic) {
  double acc = w[0] * x[i];
  const auto ni = static_cast<std::ptrdiff_t>(n);
  for (std::size_t d = 1; d <= width; ++d) {
    auto lo = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(d);
    auto hi = static_cast<std::ptrdiff_t>(i + d);
    double pair = 0.0;
    if (periodic) {
      lo = ((lo % ni) + ni) % ni;
      hi = hi % ni;
      pair = x[lo] + x[hi];
    } else {
      if (lo >= 0) pair += x[lo];
      if (hi < ni) pair += x[hi];
    }
    acc += w[d] * pair;
  }
  return acc;
}

void symmetric_stencil_scalar(const double* w, std::size_t width, const double* x, double* out,
                              std::size_t n, double scale, bool periodic) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * stencil_point(w, width, x, n, i, periodic);
}

const KernelTable kScalarTable{
    "scalar",       dot_scalar,     max_abs_scalar,           max_abs_diff_scalar,
    axpy_scalar,    lincomb_scalar, symmetric_stencil_scalar, gemv_scalar,
    gemv_t_scalar,
};

}  // namespace hbvm::kernels::detail
