#pragma once

#include <cstddef>
#include <cstdint>

#include "demorgan/kernels.hpp"

namespace demorgan::kernels::detail {

// logs points at K columns of stride `stride`; n of lane i is first + i.
using LevelCoefficientsFn = void (*)(int K, const double* m1, std::size_t count, std::int64_t first,
                                     const double* logs, std::size_t stride, double* out);
using CountAtLeastFn = std::size_t (*)(const double* s, std::size_t count, double c, std::uint8_t* mask);
using MinMaxFn = MinMax (*)(const double* v, std::size_t count);

struct KernelTable {
  LevelCoefficientsFn level_coefficients;
  CountAtLeastFn count_at_least;
  MinMaxFn min_max;
};

extern const KernelTable kScalarKernels;
#if defined(DEMORGAN_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif

}  // namespace demorgan::kernels::detail
