#pragma once

// Iterated logarithms and the level-K threshold shared by every test:
//
//   baseline_K(n) = 1 + 1/n + (1/n) * sum_{i=1}^{K-1} 1 / prod_{k=1}^{i} ln_(k) n
//   denom_K(n)    = n * prod_{k=1}^{K} ln_(k) n
//
// A measurement m at index n is written m = baseline_K(n) + s_n / denom_K(n).

#include <array>
#include <cstdint>

#include "demorgan/errors.hpp"

namespace demorgan {

/// Deepest supported level. ln_(5) n is nonpositive for every n below ~1e1656520.
inline constexpr int kMaxLevel = 4;

struct BertrandLevel {
  int K = 1;
  /// Evaluation requires ln_(K) n > safety_margin (0 = bare positivity).
  double safety_margin = 0.0;

  BertrandLevel() = default;
  BertrandLevel(int level, double margin = 0.0);

  BertrandLevel next() const { return BertrandLevel(K + 1, safety_margin); }
};

/// ln applied k times. Throws DomainError when an argument of ln is <= 0.
double iter_ln(int k, double x);

/// Smallest n >= 1 with ln_(K) n > threshold (every intermediate iterate positive).
/// Throws OverflowError for K > kMaxLevel or when the threshold is beyond int64.
std::int64_t min_domain(int K, double threshold = 0.0);
std::int64_t min_domain(const BertrandLevel& level);

/// Terms of the level-K threshold at one index.
struct LevelPoint {
  std::int64_t n = 0;
  int K = 0;
  /// logs[k-1] = ln_(k) n for k = 1..K.
  std::array<double, kMaxLevel + 1> logs{};
  /// baseline - 1, summed smallest-first with compensation.
  double baseline_excess = 0.0;
  double denom = 0.0;
};

/// Evaluates the level at n; DomainError if n < min_domain(level).
LevelPoint evaluate_level(const BertrandLevel& level, std::int64_t n);

double baseline(const BertrandLevel& level, std::int64_t n);
/// baseline(level, n) - 1 without the cancellation of forming the baseline first.
double baseline_excess(const BertrandLevel& level, std::int64_t n);
double denom(const BertrandLevel& level, std::int64_t n);

/// Re-expresses a level-K excess (1 + eps)/denom_K as 1/denom_K + e/denom_{K+1}:
/// returns e = eps * ln_(K+1) n. Requires n >= min_domain(K + 1).
double escalate_excess(const BertrandLevel& level, std::int64_t n, double eps);

}  // namespace demorgan
