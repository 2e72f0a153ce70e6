#include "demorgan/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "demorgan/errors.hpp"
#include "demorgan/kernels.hpp"

namespace demorgan {

const char* to_string(MeasureMode mode) { return mode == MeasureMode::Ratio ? "RATIO" : "ROOT"; }

const char* to_string(IndexSetClass cls) {
  switch (cls) {
    case IndexSetClass::StronglyAlmostAll:
      return "STRONGLY_ALMOST_ALL";
    case IndexSetClass::AlmostAll:
      return "ALMOST_ALL";
    case IndexSetClass::DensityBelowOne:
      return "DENSITY_BELOW_ONE";
    case IndexSetClass::Undecided:
      return "UNDECIDED";
  }
  return "UNDECIDED";
}

// ---------------------------------------------------------------------------
// TermStream

TermStream::TermStream(std::int64_t start, std::vector<double> log_hi, std::vector<double> log_lo,
                       std::optional<bool> monotone)
    : start_(start), hi_(std::move(log_hi)), lo_(std::move(log_lo)) {
  if (start_ < 1) throw IndexError("stream start index must be >= 1");
  if (lo_.empty()) lo_.assign(hi_.size(), 0.0);
  if (lo_.size() != hi_.size()) throw IndexError("log_lo and log_hi lengths differ");
  for (std::size_t i = 0; i < hi_.size(); ++i) {
    if (!std::isfinite(hi_[i]) || !std::isfinite(lo_[i])) {
      throw DomainError("log term at n = " + std::to_string(start_ + static_cast<std::int64_t>(i)) +
                        " is not finite");
    }
  }
  if (monotone) {
    monotone_ = *monotone;
  } else {
    monotone_ = true;
    for (std::size_t i = 1; i < hi_.size(); ++i) {
      if ((hi_[i] - hi_[i - 1]) + (lo_[i] - lo_[i - 1]) > 0.0) {
        monotone_ = false;
        break;
      }
    }
  }
}

TermStream TermStream::from_terms(std::int64_t start, std::span<const double> terms) {
  std::vector<double> logs;
  logs.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i] > 0.0) || !std::isfinite(terms[i])) {
      throw DomainError("term at n = " + std::to_string(start + static_cast<std::int64_t>(i)) +
                        " is not a finite positive number");
    }
    logs.push_back(std::log(terms[i]));
  }
  return TermStream(start, std::move(logs));
}

numeric::DoubleDouble TermStream::log_term(std::int64_t n) const {
  if (!contains(n)) {
    throw IndexError("index " + std::to_string(n) + " outside stream [" + std::to_string(start_) + ", " +
                     std::to_string(last_index()) + "]");
  }
  const auto i = static_cast<std::size_t>(n - start_);
  return {hi_[i], lo_[i]};
}

TermStream TermStream::truncated(std::int64_t last) const {
  if (last >= last_index()) return *this;
  if (last < start_) throw IndexError("truncation leaves an empty stream");
  const auto count = static_cast<std::size_t>(last - start_ + 1);
  return TermStream(start_, std::vector<double>(hi_.begin(), hi_.begin() + static_cast<std::ptrdiff_t>(count)),
                    std::vector<double>(lo_.begin(), lo_.begin() + static_cast<std::ptrdiff_t>(count)));
}

// ---------------------------------------------------------------------------
// Measurements

namespace {

double log_drop(const TermStream& ts, std::int64_t n) {
  return numeric::difference(ts.log_term(n), ts.log_term(n + 1));
}

double root_exponent(const TermStream& ts, std::int64_t n) {
  const auto lt = ts.log_term(n);
  const double nd = static_cast<double>(n);
  return -(lt.hi / nd) - (lt.lo / nd);
}

}  // namespace

double measure_ratio(const TermStream& ts, std::int64_t n) { return std::exp(log_drop(ts, n)); }
double ratio_minus_one(const TermStream& ts, std::int64_t n) { return std::expm1(log_drop(ts, n)); }
double measure_root(const TermStream& ts, std::int64_t n) { return std::exp(root_exponent(ts, n)); }
double root_minus_one(const TermStream& ts, std::int64_t n) { return std::expm1(root_exponent(ts, n)); }

double extract_s_from_excess(const BertrandLevel& level, std::int64_t n, double measured_minus_one) {
  const LevelPoint p = evaluate_level(level, n);
  return numeric::level_coefficient(measured_minus_one, static_cast<double>(n), p.logs.data(), level.K);
}

double extract_s(const BertrandLevel& level, std::int64_t n, double measured) {
  return extract_s_from_excess(level, n, measured - 1.0);
}

// ---------------------------------------------------------------------------
// Traces

std::pair<std::int64_t, std::int64_t> valid_index_range(const TermStream& ts, const BertrandLevel& level,
                                                        MeasureMode mode) {
  if (ts.empty()) return {1, 0};
  const std::int64_t first = std::max(ts.start_index(), min_domain(level));
  const std::int64_t last = mode == MeasureMode::Ratio ? ts.last_index() - 1 : ts.last_index();
  return {first, last};
}

std::vector<double> measurements_minus_one(const TermStream& ts, MeasureMode mode, std::int64_t first,
                                           std::size_t count) {
  std::vector<double> m1(count);
  const auto hi = ts.log_hi();
  const auto lo = ts.log_lo();
  const std::int64_t start = ts.start_index();
  if (count == 0) return m1;
  const std::int64_t last_needed = first + static_cast<std::int64_t>(count) - 1 + (mode == MeasureMode::Ratio ? 1 : 0);
  if (first < start || last_needed > ts.last_index()) throw IndexError("measurement range outside stream");
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(first - start) + i;
    if (mode == MeasureMode::Ratio) {
      m1[i] = std::expm1((hi[j] - hi[j + 1]) + (lo[j] - lo[j + 1]));
    } else {
      const double nd = static_cast<double>(first + static_cast<std::int64_t>(i));
      m1[i] = std::expm1(-(hi[j] / nd) - (lo[j] / nd));
    }
  }
  return m1;
}

SLevelTrace s_trace(const TermStream& ts, const BertrandLevel& level, MeasureMode mode, const TraceOptions& options) {
  const auto [first, last] = valid_index_range(ts, level, mode);
  const std::int64_t available = last - first + 1;
  if (available < static_cast<std::int64_t>(options.min_tail_samples) || available <= 0) {
    throw InsufficientDataError("level " + std::to_string(level.K) + " " + to_string(mode) + ": only " +
                                std::to_string(std::max<std::int64_t>(available, 0)) +
                                " indices past the domain start, need " +
                                std::to_string(options.min_tail_samples));
  }
  const auto count = static_cast<std::size_t>(available);

  SLevelTrace trace;
  trace.level = level;
  trace.mode = mode;
  trace.n.resize(count);
  for (std::size_t i = 0; i < count; ++i) trace.n[i] = first + static_cast<std::int64_t>(i);

  const std::vector<double> m1 = measurements_minus_one(ts, mode, first, count);
  const kernels::LogColumns logs(first, count, level.K);
  trace.s.resize(count);
  kernels::level_coefficients(level.K, m1, logs, trace.s);

  auto window = static_cast<std::size_t>(std::ceil(static_cast<double>(count) * options.tail_fraction));
  window = std::clamp(window, options.min_tail_samples, count);
  const auto tail = std::span<const double>(trace.s).subspan(count - window);
  const auto mm = kernels::min_max(tail);
  trace.tail_liminf_est = mm.min;
  trace.tail_limsup_est = mm.max;
  trace.window_first = trace.n[count - window];
  trace.window_last = trace.n.back();
  trace.window_samples = window;
  return trace;
}

std::optional<double> extrapolated_limit(const SLevelTrace& trace) {
  const int next = trace.level.K + 1;
  if (next > kMaxLevel || trace.n.empty()) return std::nullopt;
  const std::int64_t last = trace.n.back();
  std::int64_t lower = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(last))));
  try {
    lower = std::max(lower, min_domain(next, 0.5));
  } catch (const OverflowError&) {
    return std::nullopt;
  }
  lower = std::max(lower, trace.n.front());
  if (last - lower < 50) return std::nullopt;

  // A level-J boundary series has s_K = 1 + 1/l_{K+1} + 1/(l_{K+1} l_{K+2}) + ...
  // with l_k = ln_(k) n, so the second correction is fitted when level K+2 is
  // defined on the whole window.
  bool second = false;
  if (next + 1 <= kMaxLevel) {
    try {
      second = lower >= min_domain(next + 1, 0.5);
    } catch (const OverflowError&) {
    }
  }

  // Geometric sample of at most 512 indices in [lower, last].
  constexpr int kSamples = 512;
  const double ratio = std::pow(static_cast<double>(last) / static_cast<double>(lower), 1.0 / (kSamples - 1));
  std::vector<double> x1, x2, y;
  std::int64_t prev = -1;
  double pos = static_cast<double>(lower);
  for (int i = 0; i < kSamples; ++i, pos *= ratio) {
    const std::int64_t n = std::min(last, static_cast<std::int64_t>(std::llround(pos)));
    if (n <= prev) continue;
    prev = n;
    const double l1 = iter_ln(next, static_cast<double>(n));
    x1.push_back(1.0 / l1);
    x2.push_back(second ? 1.0 / (l1 * std::log(l1)) : 0.0);
    y.push_back(trace.s[static_cast<std::size_t>(n - trace.n.front())]);
  }
  const auto used = static_cast<double>(y.size());
  if (y.size() < 16) return std::nullopt;

  auto mean = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (const double e : v) acc += e;
    return acc / used;
  };
  const double m1 = mean(x1), m2 = mean(x2), my = mean(y);
  double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = x1[i] - m1, b = x2[i] - m2, c = y[i] - my;
    s11 += a * a;
    s12 += a * b;
    s22 += b * b;
    s1y += a * c;
    s2y += b * c;
  }
  if (!(s11 > 1e-12 * used)) return std::nullopt;
  const double det = s11 * s22 - s12 * s12;
  if (second && det > 1e-12 * s11 * s22) {
    const double b1 = (s22 * s1y - s12 * s2y) / det;
    const double b2 = (s11 * s2y - s12 * s1y) / det;
    return my - b1 * m1 - b2 * m2;
  }
  return my - (s1y / s11) * m1;
}

// ---------------------------------------------------------------------------
// Index sets

IndexSetStats index_set_stats(std::span<const std::uint8_t> membership, const IndexSetConfig& config) {
  IndexSetStats st;
  const auto h = static_cast<std::int64_t>(membership.size());
  st.horizon = h;
  st.counting.resize(membership.size());
  std::int64_t count = 0;
  for (std::size_t i = 0; i < membership.size(); ++i) {
    count += membership[i] ? 1 : 0;
    st.counting[i] = count;
  }
  if (h == 0) return st;

  const auto tail = std::max<std::int64_t>(1, static_cast<std::int64_t>(static_cast<double>(h) * config.tail_fraction));
  st.window_first = h - tail + 1;
  const std::int64_t before = st.window_first >= 2 ? st.counting[static_cast<std::size_t>(st.window_first - 2)] : 0;
  st.density_est = static_cast<double>(st.counting.back() - before) / static_cast<double>(tail);
  st.global_density = static_cast<double>(st.counting.back()) / static_cast<double>(h);
  for (std::int64_t n = st.window_first; n <= h; ++n) {
    st.defect_sup_tail = std::max(st.defect_sup_tail, n - st.counting[static_cast<std::size_t>(n - 1)]);
  }
  const auto root = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(h)))));
  st.defect_at_sqrt = root - st.counting[static_cast<std::size_t>(root - 1)];
  const std::int64_t defect_end = h - st.counting.back();

  if (h < config.min_horizon) {
    st.cls = IndexSetClass::Undecided;
  } else if (st.density_est >= config.almost_all_density) {
    const bool bounded = st.defect_sup_tail <= config.defect_cap && defect_end == st.defect_at_sqrt;
    st.cls = bounded ? IndexSetClass::StronglyAlmostAll : IndexSetClass::AlmostAll;
  } else if (st.density_est <= config.below_one_density) {
    st.cls = IndexSetClass::DensityBelowOne;
    st.alpha = st.density_est;
  } else {
    st.cls = IndexSetClass::Undecided;
  }
  return st;
}

IndexSetStats index_set_stats(const std::function<bool(std::int64_t)>& member, std::int64_t horizon,
                              const IndexSetConfig& config) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
  for (std::int64_t n = 1; n <= horizon; ++n) mask[static_cast<std::size_t>(n - 1)] = member(n) ? 1 : 0;
  return index_set_stats(mask, config);
}

// ---------------------------------------------------------------------------
// Envelope

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(i / 10.0);
  return grid;
}

EnvelopeFit envelope_fit(const TermStream& ts, std::span<const double> alpha_grid) {
  if (ts.empty()) throw NoEnvelopeError("empty stream");
  std::vector<double> grid = alpha_grid.empty() ? default_alpha_grid()
                                                : std::vector<double>(alpha_grid.begin(), alpha_grid.end());
  std::sort(grid.begin(), grid.end(), std::greater<>());

  const std::size_t size = ts.size();
  const std::size_t head = std::max<std::size_t>(1, size - size / 4);
  std::vector<double> lnn(size);
  std::vector<double> lna(size);
  for (std::size_t i = 0; i < size; ++i) {
    lnn[i] = std::log(static_cast<double>(ts.start_index() + static_cast<std::int64_t>(i)));
    lna[i] = ts.log_hi()[i] + ts.log_lo()[i];
  }
  constexpr double kSlack = 1e-9;
  std::vector<double> v(size);
  for (const double alpha : grid) {
    if (!(alpha > 0.0)) continue;
    for (std::size_t i = 0; i < size; ++i) v[i] = lna[i] + alpha * lnn[i];
    const double head_max = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(head));
    bool accepted = true;
    if (head < size) {
      const double tail_max = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(head), v.end());
      accepted = tail_max <= head_max + kSlack && v.back() <= v[head] + kSlack;
    }
    if (!accepted) continue;

    const double vmax = std::max(head_max, *std::max_element(v.begin(), v.end()));
    EnvelopeFit fit;
    fit.alpha = alpha;
    fit.r = std::exp(vmax) * (1.0 + 1e-9);
    fit.holds_everywhere = true;
    const double log_r = std::log(fit.r);
    for (std::size_t i = 0; i < size; ++i) {
      if (!(lna[i] < log_r - alpha * lnn[i])) {
        fit.holds_everywhere = false;
        break;
      }
    }
    return fit;
  }
  throw NoEnvelopeError("no alpha in [" + std::to_string(grid.back()) + ", " + std::to_string(grid.front()) +
                        "] bounds the terms by r n^-alpha (terms not decaying polynomially)");
}

}  // namespace demorgan
