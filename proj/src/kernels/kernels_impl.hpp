#pragma once

#include <cstddef>

#include "hbvm/kernels.hpp"

namespace hbvm::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(HBVM_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

// Single output entry of the symmetric stencil; shared by the SIMD variants
// for the boundary strips.
double stencil_point(const double* w, std::size_t width, const double* x, std::size_t n,
                     std::size_t i, bool periodic);

void symmetric_stencil_scalar(const double* w, std::size_t width, const double* x, double* out,
                              std::size_t n, double scale, bool periodic);

}  // namespace hbvm::kernels::detail
