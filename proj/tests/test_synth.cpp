#include <cmath>
#include <vector>

#include "doctest.h"
#include "demorgan/classifier.hpp"
#include "demorgan/errors.hpp"
#include "demorgan/synth.hpp"

using namespace demorgan;

namespace {

double partial_sum(const TermStream& ts, std::int64_t last) {
  double acc = 0.0;
  for (std::int64_t n = ts.start_index(); n <= last; ++n) acc += ts.term(n);
  return acc;
}

}  // namespace

TEST_CASE("closed forms with C_n fixed at its limit") {
  const double inv_e = std::exp(-1.0);
  const auto k1 = closed_form_terms(1, SFunction::constant(2.0), {2, 100});
  CHECK(k1.term(10) == doctest::Approx(inv_e / 100.0).epsilon(1e-14));
  const auto k2 = closed_form_terms(2, SFunction::constant(2.0), {3, 100});
  const double l = std::log(50.0);
  CHECK(k2.term(50) == doctest::Approx(inv_e / (50.0 * l * l)).epsilon(1e-14));
  const auto k0 = closed_form_terms(1, SFunction::constant(0.0), {2, 100});
  CHECK(k0.term(77) == doctest::Approx(inv_e).epsilon(1e-15));
  CHECK_THROWS_AS(closed_form_terms(2, SFunction::constant(2.0), {2, 100}), DomainError);
}

TEST_CASE("root and ratio plants recover s") {
  for (int K = 1; K <= 3; ++K) {
    const IndexRange range{min_domain(K, 0.1), 20000};
    for (const double s : {-2.0, 0.0, 0.5, 1.0, 1.5, 3.0}) {
      const auto sf = SFunction::constant(s);
      CHECK(max_plant_error(from_root(K, sf, range), K, sf, MeasureMode::Root) <= 1e-9);
      CHECK(max_plant_error(from_ratio(K, sf, 1.0, range), K, sf, MeasureMode::Ratio) <= 1e-9);
    }
  }
  const auto eps = SFunction::one_plus_eps(EpsKind::COverLog, 2.0);
  CHECK(max_plant_error(from_root(1, eps, {3, 20000}), 1, eps, MeasureMode::Root) <= 1e-9);
}

TEST_CASE("ratio plant with s = 0 telescopes to 1/n") {
  const auto ts = from_ratio(1, SFunction::constant(0.0), 1.0, {1, 100000});
  for (const std::int64_t n : {1, 2, 7, 1000, 100000}) {
    CHECK(ts.term(n) == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-13));
  }
  const auto fast = from_ratio(1, SFunction::constant(3.0), 1.0, {2, 100000});
  CHECK(classify_ratio(fast, BertrandLevel(1)).decision == Decision::Converges);
}

TEST_CASE("root plants tend to e^-1") {
  // (1 + 1/n + s/(n ln n))^-n = e^-1 (1 - s/ln n + ...): the terms do not vanish.
  const auto ts = from_root(1, SFunction::constant(2.0), {2, 1000000});
  CHECK(ts.term(1000000) * std::exp(1.0) == doctest::Approx(1.0 - 2.0 / std::log(1e6)).epsilon(0.02));
  CHECK(generator_truth(Generator::FromRoot, 1, SFunction::constant(2.0)) == Truth::Diverges);
}

TEST_CASE("generator preconditions") {
  CHECK_THROWS_AS(from_root(1, SFunction::constant(-1e6), {2, 100}), NegativeBaseError);
  CHECK_THROWS_AS(from_root(3, SFunction::constant(1.0), {10, 100}), DomainError);
  CHECK_THROWS_AS(from_root(5, SFunction::constant(1.0), {10, 100}), OverflowError);
  CHECK_THROWS_AS(SFunction::one_plus_eps(EpsKind::COverLog, 1.0), DomainError);
  CHECK_THROWS_AS(from_ratio(1, SFunction::constant(1.0), 0.0, {2, 100}), DomainError);
  CHECK_THROWS_AS(boundary_family(1, EpsKind::OneOverLog, {2, 100}), DomainError);
}

TEST_CASE("boundary family plants s = 1 + eps") {
  const auto zero = boundary_family(1, EpsKind::Zero, {2, 10000});
  const auto one = SFunction::constant(1.0);
  CHECK(max_plant_error(zero, 1, one, MeasureMode::Root) <= 1e-9);
  const auto sf = SFunction::one_plus_eps(EpsKind::OneOverLog);
  const auto ts = boundary_family(1, EpsKind::OneOverLog, {3, 10000});
  CHECK(max_plant_error(ts, 1, sf, MeasureMode::Root) <= 1e-9);
  CHECK(sf.value(1, 100) == doctest::Approx(1.0 + 1.0 / std::log(std::log(100.0))));
}

TEST_CASE("Table 1 schedules") {
  Table1Schedule blocks{17, 2.0, Table1Schedule::Pattern::GrowingBlocks};
  // Blocks 1,1,2,2,3,3 from n0 = 17, starting HIGH.
  const std::vector<int> expect{1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0, 0};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(blocks.is_high(17 + static_cast<std::int64_t>(i)) == (expect[i] == 1));
  CHECK_FALSE(blocks.is_high(16));
  const auto mask = blocks.membership(40);
  for (std::int64_t n = 1; n <= 40; ++n) CHECK((mask[n - 1] != 0) == blocks.is_high(n));

  const auto big = index_set_stats(blocks.membership(1000000));
  CHECK(big.density_est == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::fabs(big.density_est - 0.5) <= 0.05);

  Table1Schedule evenodd{17, 2.0, Table1Schedule::Pattern::EvenOdd};
  const auto st = table1_schedule_stream(1, evenodd, {17, 100000});
  const auto stats = index_set_stats(st.high);
  CHECK(stats.density_est == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(stats.cls == IndexSetClass::DensityBelowOne);

  Table1Schedule early{2, 2.0, Table1Schedule::Pattern::EvenOdd};
  CHECK_THROWS_AS(table1_schedule_stream(1, early, {3, 1000}), DomainError);
}

TEST_CASE("LOW terms, renumbered, stay under the level-(K+1) baseline") {
  for (const auto pattern : {Table1Schedule::Pattern::EvenOdd, Table1Schedule::Pattern::GrowingBlocks}) {
    for (int K = 1; K <= 2; ++K) {
      const std::int64_t n0 = K == 1 ? 17 : 21;
      const Table1Schedule sched{n0, 2.0, pattern};
      const auto st = table1_schedule_stream(K, sched, {n0, 200000});
      std::int64_t j = n0;
      double worst = -1.0;
      for (std::int64_t n = n0; n <= 200000; ++n) {
        if (st.high[n - 1]) continue;
        // a'_j = a_n; compare a'_j^(-1/j) - 1 with baseline_{K+1}(j) - 1.
        const double root_m1 = std::expm1(-st.stream.log_term(n).value() / static_cast<double>(j));
        const double bound = baseline_excess(BertrandLevel(K + 1), j);
        worst = std::max(worst, (root_m1 - bound) / bound);
        ++j;
      }
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("paired counterexample") {
  const auto ts = paired_counterexample(1, 2.0, {3, 200000});
  CHECK(ts.monotone_nonincreasing());
  for (std::int64_t n = 3; n < 200000; ++n) REQUIRE(ts.log_term(n + 1).value() <= ts.log_term(n).value());
  for (std::int64_t k = 2; k < 100000; k += 997) CHECK(ts.log_term(2 * k - 1).hi == ts.log_term(2 * k).hi);

  // Decay exponent from a log-log fit over [1e3, 2e5].
  const double slope = (ts.log_term(200000).value() - ts.log_term(1000).value()) / (std::log(200000.0) - std::log(1000.0));
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.02));
  const double s1 = partial_sum(ts, 100000);
  const double s2 = partial_sum(ts, 200000);
  // Pairs of e^-1 k^-2 over k in (5e4, 1e5]: 2 e^-1 (1/5e4 - 1/1e5) to leading order.
  CHECK(s2 - s1 == doctest::Approx(2.0 * std::exp(-1.0) * (1.0 / 50000.0 - 1.0 / 100000.0)).epsilon(1e-3));

  std::vector<double> m1;
  for (std::int64_t n = 3; n < 200000; ++n) m1.push_back(ratio_minus_one(ts, n));
  const auto mask = threshold_membership(BertrandLevel(1), 3, m1, 2.0, 199999);
  CHECK(index_set_stats(mask).density_est == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(generator_truth(Generator::Paired, 1, SFunction::constant(2.0), 2.0) == Truth::Converges);
  CHECK_THROWS_AS(paired_counterexample(1, 2.0, {1, 100}), DomainError);
}

TEST_CASE("divergent constructions") {
  DivergentCase one;
  one.kind = DivergentCase::Kind::I;
  one.c_star = 0.5;
  const auto ts = divergent_case_terms(one, {2, 100000});
  CHECK(partial_sum(ts, 100000) - partial_sum(ts, 50000) > 1000.0);
  one.c_star = 1.5;
  CHECK_THROWS_AS(divergent_case_terms(one, {2, 100}), DomainError);

  DivergentCase two;
  two.kind = DivergentCase::Kind::II;
  two.steps = {{2, 1}, {16, 2}};
  const auto t2 = divergent_case_terms(two, {2, 100000});
  // Terms of 1/(n ln n) dominate the tail sums: both grow without bound.
  double harmonic_log = 0.0;
  for (std::int64_t n = 50000; n <= 100000; ++n) harmonic_log += 1.0 / (static_cast<double>(n) * std::log(static_cast<double>(n)));
  CHECK(partial_sum(t2, 100000) - partial_sum(t2, 49999) >= harmonic_log);
  // At n = 16 the level-2 plant takes over.
  CHECK(t2.log_term(16).hi == from_root(2, SFunction::constant(1.0), {16, 16}).log_term(16).hi);

  two.steps = {{2, 1}, {10, 3}};
  CHECK_THROWS_AS(divergent_case_terms(two, {2, 1000}), StepError);
  two.steps = {{2, 2}, {100, 1}};
  CHECK_THROWS_AS(divergent_case_terms(two, {3, 1000}), StepError);

  const auto steps = default_step_map({2, 100000});
  REQUIRE(steps.size() == 3);
  CHECK(steps[1].from == min_domain(2, 0.1));
  CHECK(steps[2].from == min_domain(3, 0.1));
  two.steps.clear();
  CHECK_NOTHROW(divergent_case_terms(two, {2, 1000}));
}

TEST_CASE("truth labels") {
  CHECK(generator_truth(Generator::ClosedForm, 1, SFunction::constant(2.0)) == Truth::Converges);
  CHECK(generator_truth(Generator::ClosedForm, 1, SFunction::constant(1.0)) == Truth::Diverges);
  CHECK(generator_truth(Generator::FromRatio, 1, SFunction::one_plus_eps(EpsKind::COverLog, 2.0)) == Truth::Converges);
  CHECK(generator_truth(Generator::FromRatio, 1, SFunction::one_plus_eps(EpsKind::OneOverLog)) == Truth::Diverges);
  CHECK(generator_truth(Generator::Table1, 1, SFunction::scheduled({})) == Truth::Diverges);
  CHECK(std::string(to_string(Truth::Boundary)) == "BOUNDARY");
}
