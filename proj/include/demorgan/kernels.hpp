#pragma once

// Data-parallel inner loops over index ranges. Each kernel has a scalar
// reference and an AVX2 variant; the variant is chosen at runtime from the
// CPU (override with DEMORGAN_GATE_SIMD=scalar|avx2). Both variants perform
// the same IEEE operations in the same order and agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace demorgan::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws ConfigError when the ISA is not available on this CPU/build.
void set_active_isa(Isa isa);

/// ln_(k)(first + i) for k = 1..K and i < count, stored column by column.
class LogColumns {
 public:
  LogColumns() = default;
  /// Throws DomainError if some ln_(k) is undefined inside the range.
  LogColumns(std::int64_t first, std::size_t count, int K);

  std::int64_t first() const { return first_; }
  std::size_t size() const { return count_; }
  int levels() const { return K_; }
  std::span<const double> column(int k) const {
    return {data_.data() + static_cast<std::size_t>(k - 1) * count_, count_};
  }

 private:
  std::int64_t first_ = 0;
  std::size_t count_ = 0;
  int K_ = 0;
  std::vector<double> data_;
};

/// out[i] = s at index first+i for level K, from m1[i] = measurement - 1.
/// Uses columns 1..K of logs; logs.first() must equal the first index and
/// logs.size() >= m1.size().
void level_coefficients(int K, std::span<const double> m1, const LogColumns& logs, std::span<double> out);

/// mask[i] = (s[i] >= c); returns the number of set entries.
std::size_t count_at_least(std::span<const double> s, double c, std::span<std::uint8_t> mask);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
};
/// Requires a nonempty span without NaNs.
MinMax min_max(std::span<const double> values);

}  // namespace demorgan::kernels
