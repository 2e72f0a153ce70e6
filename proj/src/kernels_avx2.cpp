// Compiled with -mavx2 (no FMA): every lane repeats the scalar operation order.

#include <immintrin.h>

#include <algorithm>

#include "demorgan/numeric.hpp"
#include "kernels_impl.hpp"

namespace demorgan::kernels::detail {
namespace {

inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }
inline __m256d absolute(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// Lane-wise numeric::NeumaierSum::add.
inline void neumaier_add(__m256d& sum, __m256d& comp, __m256d x) {
  const __m256d t = _mm256_add_pd(sum, x);
  const __m256d big_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
  const __m256d big_x = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
  const __m256d sum_wins = _mm256_cmp_pd(absolute(sum), absolute(x), _CMP_GE_OQ);
  comp = _mm256_add_pd(comp, _mm256_blendv_pd(big_x, big_sum, sum_wins));
  sum = t;
}

void level_coefficients_avx2(int K, const double* m1, std::size_t count, std::int64_t first, const double* logs,
                             std::size_t stride, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d n =
        _mm256_add_pd(_mm256_set1_pd(static_cast<double>(first + static_cast<std::int64_t>(i))), lane);
    const __m256d inv_n = _mm256_div_pd(one, n);
    __m256d sum = _mm256_loadu_pd(m1 + i);
    __m256d comp = _mm256_setzero_pd();
    neumaier_add(sum, comp, negate(inv_n));
    __m256d p = one;
    for (int k = 1; k < K; ++k) {
      p = _mm256_mul_pd(p, _mm256_loadu_pd(logs + static_cast<std::size_t>(k - 1) * stride + i));
      neumaier_add(sum, comp, negate(_mm256_div_pd(inv_n, p)));
    }
    p = _mm256_mul_pd(p, _mm256_loadu_pd(logs + static_cast<std::size_t>(K - 1) * stride + i));
    const __m256d d = _mm256_mul_pd(n, p);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(sum, comp), d));
  }
  if (i < count) {
    double lg[8];
    for (; i < count; ++i) {
      for (int k = 0; k < K; ++k) lg[k] = logs[static_cast<std::size_t>(k) * stride + i];
      out[i] = numeric::level_coefficient(m1[i], static_cast<double>(first + static_cast<std::int64_t>(i)), lg, K);
    }
  }
}

std::size_t count_at_least_avx2(const double* s, std::size_t count, double c, std::uint8_t* mask) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(s + i), cv, _CMP_GE_OQ));
    mask[i] = bits & 1;
    mask[i + 1] = (bits >> 1) & 1;
    mask[i + 2] = (bits >> 2) & 1;
    mask[i + 3] = (bits >> 3) & 1;
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
  }
  for (; i < count; ++i) {
    const bool in = s[i] >= c;
    mask[i] = in ? 1 : 0;
    hits += in ? 1 : 0;
  }
  return hits;
}

MinMax min_max_avx2(const double* v, std::size_t count) {
  if (count < 8) {
    MinMax r{v[0], v[0]};
    for (std::size_t i = 1; i < count; ++i) {
      r.min = std::min(r.min, v[i]);
      r.max = std::max(r.max, v[i]);
    }
    return r;
  }
  __m256d lo = _mm256_loadu_pd(v);
  __m256d hi = lo;
  std::size_t i = 4;
  for (; i + 4 <= count; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    lo = _mm256_min_pd(lo, x);
    hi = _mm256_max_pd(hi, x);
  }
  alignas(32) double l[4];
  alignas(32) double h[4];
  _mm256_store_pd(l, lo);
  _mm256_store_pd(h, hi);
  MinMax r{std::min({l[0], l[1], l[2], l[3]}), std::max({h[0], h[1], h[2], h[3]})};
  for (; i < count; ++i) {
    r.min = std::min(r.min, v[i]);
    r.max = std::max(r.max, v[i]);
  }
  return r;
}

}  // namespace

const KernelTable kAvx2Kernels{&level_coefficients_avx2, &count_at_least_avx2, &min_max_avx2};

}  // namespace demorgan::kernels::detail
