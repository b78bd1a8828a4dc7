#pragma once
// Data-parallel inner loops used by the semi-discretizations and the
// integrator. Every kernel has a scalar reference implementation; a SIMD
// variant (AVX2+FMA on x86-64) is picked at runtime when the CPU supports it.
//
// The backend can be forced with the HBVM_KERNELS environment variable
// ("scalar", "avx2" or "auto") or programmatically with select_backend().

#include <cstddef>
#include <span>
#include <string_view>

namespace hbvm::kernels {

enum class Backend { scalar, avx2 };

// Raw function table. All pointers are non-null for an available backend.
struct KernelTable {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = base + sum_j coeffs[j] * blocks[j*n .. j*n+n)
  void (*lincomb)(double* out, const double* base, const double* coeffs, std::size_t ncoeffs,
                  const double* blocks, std::size_t n);
  // out_i = scale * (w[0] x_i + sum_{d=1..width} w[d] (x_{i-d} + x_{i+d}))
  // Out-of-range neighbours wrap when periodic, otherwise they are treated as 0.
  void (*symmetric_stencil)(const double* w, std::size_t width, const double* x, double* out,
                            std::size_t n, double scale, bool periodic);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A row-major rows x cols
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table();

const KernelTable& active();
Backend active_backend();
// Throws std::runtime_error when the requested backend is unavailable.
void select_backend(Backend backend);
bool backend_available(Backend backend);
std::string_view backend_name(Backend backend);

// Span front-ends over the active table.
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void lincomb(std::span<double> out, std::span<const double> base, std::span<const double> coeffs,
             std::span<const double> blocks);
void symmetric_stencil(std::span<const double> weights, std::span<const double> x,
                       std::span<double> out, double scale, bool periodic);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

}  // namespace hbvm::kernels
