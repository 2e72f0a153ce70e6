#include "demorgan/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "demorgan/errors.hpp"
#include "kernels_impl.hpp"

namespace demorgan::kernels {
namespace {

Isa initial_isa() {
  Isa isa = isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  if (const char* env = std::getenv("DEMORGAN_GATE_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") isa = Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) isa = Isa::Avx2;
  }
  return isa;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const detail::KernelTable& table() {
#if defined(DEMORGAN_HAVE_AVX2)
  if (current().load(std::memory_order_relaxed) == Isa::Avx2) return detail::kAvx2Kernels;
#endif
  return detail::kScalarKernels;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(DEMORGAN_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw ConfigError(std::string("instruction set not available: ") + isa_name(isa));
  current().store(isa);
}

LogColumns::LogColumns(std::int64_t first, std::size_t count, int K) : first_(first), count_(count), K_(K) {
  if (K < 1 || K > 7) throw DomainError("log columns support 1 <= K <= 7");
  data_.resize(count * static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < count; ++i) {
    double x = static_cast<double>(first + static_cast<std::int64_t>(i));
    for (int k = 0; k < K; ++k) {
      if (!(x > 0.0)) {
        throw DomainError("ln_(" + std::to_string(k + 1) + ") undefined at n = " +
                          std::to_string(first + static_cast<std::int64_t>(i)));
      }
      x = std::log(x);
      data_[static_cast<std::size_t>(k) * count + i] = x;
    }
  }
}

void level_coefficients(int K, std::span<const double> m1, const LogColumns& logs, std::span<double> out) {
  if (K < 1 || K > logs.levels()) throw DomainError("log columns do not cover level " + std::to_string(K));
  if (m1.size() > logs.size() || out.size() < m1.size()) throw IndexError("kernel span sizes disagree");
  if (m1.empty()) return;
  table().level_coefficients(K, m1.data(), m1.size(), logs.first(), logs.column(1).data(), logs.size(), out.data());
}

std::size_t count_at_least(std::span<const double> s, double c, std::span<std::uint8_t> mask) {
  if (mask.size() < s.size()) throw IndexError("mask shorter than input");
  if (s.empty()) return 0;
  return table().count_at_least(s.data(), s.size(), c, mask.data());
}

MinMax min_max(std::span<const double> values) {
  if (values.empty()) throw IndexError("min_max of an empty span");
  return table().min_max(values.data(), values.size());
}

}  // namespace demorgan::kernels
