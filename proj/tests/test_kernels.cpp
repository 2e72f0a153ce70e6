#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "demorgan/iterlog.hpp"
#include "demorgan/kernels.hpp"
#include "demorgan/numeric.hpp"

using namespace demorgan;
using namespace demorgan::kernels;

namespace {

// Restores the dispatch choice when a test ends.
struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_active_isa(saved); }
};

std::vector<double> random_m1(std::size_t count, std::int64_t first, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> m1(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(first + static_cast<std::int64_t>(i));
    m1[i] = (1.0 + u(rng) / std::log(n)) / n;
  }
  return m1;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> run_coefficients(Isa isa, int K, std::int64_t first, const std::vector<double>& m1) {
  set_active_isa(isa);
  const LogColumns logs(first, m1.size(), K);
  std::vector<double> out(m1.size());
  level_coefficients(K, m1, logs, out);
  return out;
}

}  // namespace

TEST_CASE("log columns hold iterated logs") {
  const LogColumns logs(20, 5, 3);
  CHECK(logs.column(1)[0] == std::log(20.0));
  CHECK(logs.column(3)[0] == doctest::Approx(iter_ln(3, 20.0)).epsilon(1e-15));
  CHECK_THROWS_AS(LogColumns(1, 4, 2), DomainError);  // ln ln 1 is undefined
}

TEST_CASE("scalar kernel matches the per-index reference bit for bit") {
  IsaGuard guard;
  const std::int64_t first = 16;
  const auto m1 = random_m1(1000, first, 1);
  for (int K = 1; K <= 3; ++K) {
    const auto out = run_coefficients(Isa::Scalar, K, first, m1);
    const LogColumns logs(first, m1.size(), K);
    for (std::size_t i = 0; i < m1.size(); ++i) {
      double l[kMaxLevel];
      for (int k = 1; k <= K; ++k) l[k - 1] = logs.column(k)[i];
      const double ref = numeric::level_coefficient(m1[i], static_cast<double>(first + static_cast<std::int64_t>(i)), l, K);
      REQUIRE(std::memcmp(&ref, &out[i], sizeof ref) == 0);
    }
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference bit for bit") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  IsaGuard guard;
  for (const std::size_t count : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7}, std::size_t{8},
                                  std::size_t{13}, std::size_t{100003}}) {
    for (int K = 1; K <= 3; ++K) {
      const std::int64_t first = 16;
      const auto m1 = random_m1(count, first, static_cast<unsigned>(count * 10 + K));
      CHECK(same_bits(run_coefficients(Isa::Scalar, K, first, m1), run_coefficients(Isa::Avx2, K, first, m1)));
    }
  }
  // Level 4 lives beyond 3.8e6.
  const std::int64_t first4 = 4000000;
  const auto m4 = random_m1(4099, first4, 99);
  CHECK(same_bits(run_coefficients(Isa::Scalar, 4, first4, m4), run_coefficients(Isa::Avx2, 4, first4, m4)));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(1.0, 0.5);
  std::vector<double> s(10007);
  for (auto& x : s) x = g(rng);
  s[17] = 1.25;  // exactly on the threshold counts as a member
  for (const double c : {1.01, 1.25, 3.0}) {
    std::vector<std::uint8_t> a(s.size()), b(s.size());
    set_active_isa(Isa::Scalar);
    const auto na = count_at_least(s, c, a);
    const auto ma = min_max(s);
    set_active_isa(Isa::Avx2);
    const auto nb = count_at_least(s, c, b);
    const auto mb = min_max(s);
    CHECK(na == nb);
    CHECK(a == b);
    CHECK(ma.min == mb.min);
    CHECK(ma.max == mb.max);
  }
  std::vector<std::uint8_t> mask(s.size());
  set_active_isa(Isa::Avx2);
  count_at_least(s, 1.25, mask);
  CHECK(mask[17] == 1);
}

TEST_CASE("dispatch reports and switches the active instruction set") {
  IsaGuard guard;
  set_active_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  CHECK(std::string(isa_name(Isa::Scalar)) == "scalar");
  CHECK_THROWS_AS(min_max(std::span<const double>{}), IndexError);
}
