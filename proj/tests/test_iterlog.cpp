#include <cmath>

#include "doctest.h"
#include "demorgan/iterlog.hpp"

using namespace demorgan;

namespace {
bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }
}  // namespace

TEST_CASE("iter_ln against high-precision values") {
  CHECK(iter_ln(0, 7.5) == 7.5);
  CHECK(close_rel(iter_ln(1, 10.0), 2.302585092994045684, 1e-15));
  // ln ln ln 20, 30 digits from mpmath
  CHECK(close_rel(iter_ln(3, 20.0), 0.09275118141813487993, 1e-13));
  CHECK_THROWS_AS(iter_ln(2, 1.0), DomainError);
  // ln ln 10 = 0.834, so ln_(3) 10 < 0 and ln_(4) 10 is undefined.
  CHECK(iter_ln(3, 10.0) < 0.0);
  CHECK_THROWS_AS(iter_ln(4, 10.0), DomainError);
}

TEST_CASE("min_domain: first index with ln_(K) n above the threshold") {
  CHECK(min_domain(1) == 2);
  CHECK(min_domain(2) == 3);
  CHECK(min_domain(3) == 16);
  // ln_(4) n > 0 needs n > e^(e^e) = 3814279.1047...
  CHECK(min_domain(4) == 3814280);
  CHECK(min_domain(3, 0.1) == 21);
  CHECK_THROWS_AS(min_domain(5), OverflowError);
  CHECK(min_domain(BertrandLevel(2, 0.1)) >= min_domain(2));
  for (int K = 1; K <= 3; ++K) {
    const auto n = min_domain(K);
    CHECK(iter_ln(K, static_cast<double>(n)) > 0.0);
    if (n > 1 && K > 1) CHECK_THROWS_AS(evaluate_level(BertrandLevel(K), n - 1), DomainError);
  }
}

TEST_CASE("level threshold terms") {
  CHECK(close_rel(baseline(BertrandLevel(2), 100), 1.012171472409516259, 1e-15));
  CHECK(close_rel(baseline(BertrandLevel(1), 100), 1.01, 1e-15));
  CHECK(close_rel(denom(BertrandLevel(1), 10), 23.02585092994045684, 1e-15));
  CHECK(close_rel(denom(BertrandLevel(2), 16), 45.23895233897158852, 1e-14));
  CHECK(close_rel(baseline_excess(BertrandLevel(2), 100), 0.012171472409516259, 1e-13));
  CHECK_THROWS_AS(denom(BertrandLevel(1), 1), DomainError);
  CHECK_THROWS_AS(BertrandLevel(0), DomainError);
  CHECK_THROWS_AS(evaluate_level(BertrandLevel(5), 100), OverflowError);
}

TEST_CASE("safety margin moves the domain start") {
  const BertrandLevel lv(3, 0.1);
  CHECK_THROWS_AS(evaluate_level(lv, 20), DomainError);
  CHECK_NOTHROW(evaluate_level(lv, 21));
  CHECK(lv.next().K == 4);
  CHECK(lv.next().safety_margin == 0.1);
}

TEST_CASE("escalate_excess re-expresses a level-K excess at level K+1") {
  CHECK(close_rel(escalate_excess(BertrandLevel(1), 100, 0.5), 0.7635898129039505546, 1e-14));
  CHECK(close_rel(escalate_excess(BertrandLevel(2), 1000000, 1.0), 0.9653825322519585629, 1e-14));
  // Both sides of baseline_K + (1 + eps)/denom_K = baseline_{K+1} + e/denom_{K+1}.
  for (int K = 1; K <= 2; ++K) {
    for (const std::int64_t n : {50, 1000, 123456}) {
      const double eps = 0.3;
      const BertrandLevel lv(K);
      const double left = baseline_excess(lv, n) + (1.0 + eps) / denom(lv, n);
      const double right = baseline_excess(lv.next(), n) + escalate_excess(lv, n, eps) / denom(lv.next(), n);
      CHECK(close_rel(left, right, 1e-13));
    }
  }
}
