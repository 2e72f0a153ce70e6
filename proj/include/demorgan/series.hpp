#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "demorgan/iterlog.hpp"
#include "demorgan/numeric.hpp"

namespace demorgan {

/// Which left-hand side is compared against the level threshold:
/// RATIO uses a_n / a_{n+1}, ROOT uses a_n^(-1/n).
enum class MeasureMode { Ratio, Root };

const char* to_string(MeasureMode mode);

/// Positive terms a_start, a_start+1, ... stored as natural logs. Each log is
/// an unevaluated sum hi + lo; the low part lets generated streams keep
/// cumulative products exact enough for adjacent-term ratios.
class TermStream {
 public:
  TermStream() = default;
  /// monotone: if unset, the nonincreasing flag is determined by a scan.
  TermStream(std::int64_t start, std::vector<double> log_hi, std::vector<double> log_lo = {},
             std::optional<bool> monotone = std::nullopt);

  /// From raw terms; every term must be finite and > 0.
  static TermStream from_terms(std::int64_t start, std::span<const double> terms);

  std::int64_t start_index() const { return start_; }
  std::int64_t last_index() const { return start_ + static_cast<std::int64_t>(hi_.size()) - 1; }
  std::size_t size() const { return hi_.size(); }
  bool empty() const { return hi_.empty(); }
  bool contains(std::int64_t n) const { return n >= start_ && n <= last_index() && !empty(); }

  numeric::DoubleDouble log_term(std::int64_t n) const;
  double term(std::int64_t n) const { return std::exp(log_term(n).value()); }

  std::span<const double> log_hi() const { return hi_; }
  std::span<const double> log_lo() const { return lo_; }

  bool monotone_nonincreasing() const { return monotone_; }

  /// Copy restricted to indices <= last.
  TermStream truncated(std::int64_t last) const;

 private:
  std::int64_t start_ = 1;
  std::vector<double> hi_;
  std::vector<double> lo_;
  bool monotone_ = false;
};

/// a_n / a_{n+1}.
double measure_ratio(const TermStream& ts, std::int64_t n);
/// a_n / a_{n+1} - 1, without rounding the ratio first.
double ratio_minus_one(const TermStream& ts, std::int64_t n);
/// a_n^(-1/n) = exp(-ln a_n / n).
double measure_root(const TermStream& ts, std::int64_t n);
double root_minus_one(const TermStream& ts, std::int64_t n);

/// s = (measured - baseline(level, n)) * denom(level, n).
double extract_s(const BertrandLevel& level, std::int64_t n, double measured);
/// Same, from measured - 1.
double extract_s_from_excess(const BertrandLevel& level, std::int64_t n, double measured_minus_one);

struct TraceOptions {
  double tail_fraction = 0.25;
  std::size_t min_tail_samples = 100;
};

/// s_n over every index of the stream inside the level domain. The tail
/// estimates are the min and max of s over the last tail_fraction of the
/// indices (at least min_tail_samples of them).
struct SLevelTrace {
  BertrandLevel level;
  MeasureMode mode = MeasureMode::Ratio;
  std::vector<std::int64_t> n;
  std::vector<double> s;
  double tail_liminf_est = 0.0;
  double tail_limsup_est = 0.0;
  std::int64_t window_first = 0;
  std::int64_t window_last = 0;
  std::size_t window_samples = 0;

  std::size_t size() const { return n.size(); }
};

/// First and last index at which an s value can be formed for this stream,
/// level and mode; first > last when there are none.
std::pair<std::int64_t, std::int64_t> valid_index_range(const TermStream& ts, const BertrandLevel& level,
                                                        MeasureMode mode);

/// measurement - 1 for n = first .. first + count - 1.
std::vector<double> measurements_minus_one(const TermStream& ts, MeasureMode mode, std::int64_t first,
                                           std::size_t count);

SLevelTrace s_trace(const TermStream& ts, const BertrandLevel& level, MeasureMode mode,
                    const TraceOptions& options = {});

/// Least-squares intercept of s against 1/ln_(K+1) n (and 1/(ln_(K+1) n ln_(K+2) n)
/// when level K+2 is defined on the window) over n in [sqrt(N), N]: the value
/// s_n approaches if its drift comes from deeper levels.
/// Empty when level K+1 has no usable domain inside the trace.
std::optional<double> extrapolated_limit(const SLevelTrace& trace);

enum class IndexSetClass { StronglyAlmostAll, AlmostAll, DensityBelowOne, Undecided };

const char* to_string(IndexSetClass cls);

struct IndexSetConfig {
  std::int64_t min_horizon = 10000;
  /// Largest defect n - N(n) still treated as O(1).
  std::int64_t defect_cap = 64;
  double almost_all_density = 0.99;
  double below_one_density = 0.95;
  double tail_fraction = 0.25;
};

/// Counting function of a set of indices in [1, horizon] and its class.
/// The classes are empirical: a finite horizon cannot prove N(n) = n + O(1).
struct IndexSetStats {
  std::int64_t horizon = 0;
  /// counting[n - 1] = N(n).
  std::vector<std::int64_t> counting;
  /// Fraction of members in the tail window.
  double density_est = 0.0;
  double global_density = 0.0;
  /// max of n - N(n) over the tail window.
  std::int64_t defect_sup_tail = 0;
  /// n - N(n) at n = floor(sqrt(horizon)); the defect must not grow past it.
  std::int64_t defect_at_sqrt = 0;
  std::int64_t window_first = 0;
  IndexSetClass cls = IndexSetClass::Undecided;
  /// density_est when cls is DensityBelowOne.
  double alpha = 0.0;
};

/// membership[n - 1] != 0 marks n as a member, for n = 1 .. membership.size().
IndexSetStats index_set_stats(std::span<const std::uint8_t> membership, const IndexSetConfig& config = {});
IndexSetStats index_set_stats(const std::function<bool(std::int64_t)>& member, std::int64_t horizon,
                              const IndexSetConfig& config = {});

struct EnvelopeFit {
  double r = 0.0;
  double alpha = 0.0;
  bool holds_everywhere = false;
};

/// alpha grid used by envelope_fit: 0.1, 0.2, ..., 3.0.
std::vector<double> default_alpha_grid();

/// Largest alpha on the grid for which a_n n^alpha is not still growing at the
/// end of the stream, with r = (1 + 1e-9) * max a_n n^alpha.
/// Throws NoEnvelopeError if no grid value qualifies.
EnvelopeFit envelope_fit(const TermStream& ts, std::span<const double> alpha_grid = {});

}  // namespace demorgan
