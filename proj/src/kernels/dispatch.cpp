#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace hbvm::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(HBVM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("HBVM_KERNELS");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &detail::kScalarTable;
  if (const KernelTable* simd = avx2_table()) return simd;
  if (choice == "avx2") throw std::runtime_error("HBVM_KERNELS=avx2 but AVX2 is unavailable");
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("kernel size mismatch: ") + what);
}

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if defined(HBVM_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Backend active_backend() {
  return &active() == &detail::kScalarTable ? Backend::scalar : Backend::avx2;
}

bool backend_available(Backend backend) {
  return backend == Backend::scalar || avx2_table() != nullptr;
}

void select_backend(Backend backend) {
  if (backend == Backend::scalar) {
    current().store(&detail::kScalarTable, std::memory_order_release);
    return;
  }
  const KernelTable* simd = avx2_table();
  if (!simd) throw std::runtime_error("AVX2 kernels are not available on this machine");
  current().store(simd, std::memory_order_release);
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::scalar ? "scalar" : "avx2";
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size(), "dot");
  return active().dot(x.data(), y.data(), x.size());
}

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size(), "max_abs_diff");
  return active().max_abs_diff(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size(), "axpy");
  active().axpy(a, x.data(), y.data(), x.size());
}

void lincomb(std::span<double> out, std::span<const double> base, std::span<const double> coeffs,
             std::span<const double> blocks) {
  check_same(out.size(), base.size(), "lincomb");
  check_same(blocks.size(), coeffs.size() * out.size(), "lincomb blocks");
  active().lincomb(out.data(), base.data(), coeffs.data(), coeffs.size(), blocks.data(),
                   out.size());
}

void symmetric_stencil(std::span<const double> weights, std::span<const double> x,
                       std::span<double> out, double scale, bool periodic) {
  check_same(x.size(), out.size(), "symmetric_stencil");
  if (weights.empty()) throw std::invalid_argument("symmetric_stencil: empty weights");
  active().symmetric_stencil(weights.data(), weights.size() - 1, x.data(), out.data(), x.size(),
                             scale, periodic);
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  check_same(a.size(), rows * cols, "gemv matrix");
  check_same(x.size(), cols, "gemv x");
  check_same(y.size(), rows, "gemv y");
  active().gemv(a.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  check_same(a.size(), rows * cols, "gemv_t matrix");
  check_same(x.size(), rows, "gemv_t x");
  check_same(y.size(), cols, "gemv_t y");
  active().gemv_t(a.data(), rows, cols, x.data(), y.data());
}

}  // namespace hbvm::kernels
