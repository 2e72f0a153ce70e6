#include <algorithm>

#include "demorgan/numeric.hpp"
#include "kernels_impl.hpp"

namespace demorgan::kernels::detail {
namespace {

void level_coefficients_scalar(int K, const double* m1, std::size_t count, std::int64_t first, const double* logs,
                               std::size_t stride, double* out) {
  double lg[8];
  for (std::size_t i = 0; i < count; ++i) {
    for (int k = 0; k < K; ++k) lg[k] = logs[static_cast<std::size_t>(k) * stride + i];
    const double n = static_cast<double>(first + static_cast<std::int64_t>(i));
    out[i] = numeric::level_coefficient(m1[i], n, lg, K);
  }
}

std::size_t count_at_least_scalar(const double* s, std::size_t count, double c, std::uint8_t* mask) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const bool in = s[i] >= c;
    mask[i] = in ? 1 : 0;
    hits += in ? 1 : 0;
  }
  return hits;
}

MinMax min_max_scalar(const double* v, std::size_t count) {
  MinMax r{v[0], v[0]};
  for (std::size_t i = 1; i < count; ++i) {
    r.min = std::min(r.min, v[i]);
    r.max = std::max(r.max, v[i]);
  }
  return r;
}

}  // namespace

const KernelTable kScalarKernels{&level_coefficients_scalar, &count_at_least_scalar, &min_max_scalar};

}  // namespace demorgan::kernels::detail
