#include "demorgan/iterlog.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "demorgan/numeric.hpp"

namespace demorgan {

BertrandLevel::BertrandLevel(int level, double margin) : K(level), safety_margin(margin) {
  if (K < 1) throw DomainError("level K must be >= 1, got " + std::to_string(K));
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw DomainError("safety margin must be a finite value >= 0");
  }
}

double iter_ln(int k, double x) {
  if (k < 0) throw DomainError("iterate count must be >= 0");
  for (int i = 0; i < k; ++i) {
    if (!(x > 0.0)) {
      throw DomainError("ln_(" + std::to_string(k) + ") undefined: iterate " + std::to_string(i) +
                        " is not positive");
    }
    x = std::log(x);
  }
  return x;
}

namespace {

// ln_(K) n > threshold, with every intermediate argument positive.
bool above(int K, double n, double threshold) {
  double x = n;
  for (int i = 0; i < K; ++i) {
    if (!(x > 0.0)) return false;
    x = std::log(x);
  }
  return x > threshold;
}

}  // namespace

std::int64_t min_domain(int K, double threshold) {
  if (K < 1) throw DomainError("level K must be >= 1");
  if (K > kMaxLevel) {
    throw OverflowError("min_domain(" + std::to_string(K) + ") exceeds the supported index range (K <= " +
                        std::to_string(kMaxLevel) + ")");
  }
  // Invert ln_(K) n = threshold by exponentiating K times.
  double t = threshold;
  for (int i = 0; i < K; ++i) t = std::exp(t);
  constexpr double kLimit = 4.0e18;
  if (!std::isfinite(t) || t >= kLimit) {
    throw OverflowError("min_domain(" + std::to_string(K) + ") beyond int64 for threshold " +
                        std::to_string(threshold));
  }
  auto n = static_cast<std::int64_t>(std::floor(t)) + 1;
  if (n < 1) n = 1;
  while (n > 1 && above(K, static_cast<double>(n - 1), threshold)) --n;
  while (!above(K, static_cast<double>(n), threshold)) ++n;
  return n;
}

std::int64_t min_domain(const BertrandLevel& level) { return min_domain(level.K, level.safety_margin); }

LevelPoint evaluate_level(const BertrandLevel& level, std::int64_t n) {
  if (level.K > kMaxLevel) {
    throw OverflowError("level " + std::to_string(level.K) + " exceeds the supported maximum " +
                        std::to_string(kMaxLevel));
  }
  LevelPoint p;
  p.n = n;
  p.K = level.K;
  double x = static_cast<double>(n);
  for (int k = 1; k <= level.K; ++k) {
    if (!(x > 0.0)) {
      throw DomainError("n = " + std::to_string(n) + " is below the domain of level " + std::to_string(level.K));
    }
    x = std::log(x);
    p.logs[k - 1] = x;
  }
  if (!(x > level.safety_margin)) {
    throw DomainError("n = " + std::to_string(n) + " is below the domain of level " + std::to_string(level.K) +
                      " (ln_(K) n must exceed " + std::to_string(level.safety_margin) + ")");
  }
  const double nd = static_cast<double>(n);
  const double inv_n = 1.0 / nd;
  numeric::NeumaierSum acc(inv_n);
  double prod = 1.0;
  for (int i = 1; i < level.K; ++i) {
    prod = prod * p.logs[i - 1];
    acc.add(inv_n / prod);
  }
  prod = prod * p.logs[level.K - 1];
  p.baseline_excess = acc.value();
  p.denom = nd * prod;
  return p;
}

double baseline(const BertrandLevel& level, std::int64_t n) { return 1.0 + evaluate_level(level, n).baseline_excess; }

double baseline_excess(const BertrandLevel& level, std::int64_t n) { return evaluate_level(level, n).baseline_excess; }

double denom(const BertrandLevel& level, std::int64_t n) { return evaluate_level(level, n).denom; }

double escalate_excess(const BertrandLevel& level, std::int64_t n, double eps) {
  const LevelPoint next = evaluate_level(level.next(), n);
  return eps * next.logs[level.K];
}

}  // namespace demorgan
