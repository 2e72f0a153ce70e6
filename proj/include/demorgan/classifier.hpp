#pragma once

// Decision procedures built on the level-K threshold.
//
//  classify_ratio / classify_root   s_n from a_n/a_{n+1} or a_n^(-1/n); converges
//                                   if liminf s_n > 1, diverges if limsup s_n < 1.
//  auto_escalate                    moves to level K+1 while s_n sits at 1.
//  classify_necsuf                  index-set form: converges if, for some K and
//                                   c > 1, a_n^(-1/n) >= baseline + c/denom for
//                                   strongly almost all n; diverges if it fails
//                                   on a set of positive density for every K, c.
//  classify_ratio_sufficient        the "if" half of the above with a_n/a_{n+1}.
//
// liminf/limsup are estimated on a tail window; decisions need a margin.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "demorgan/series.hpp"

namespace demorgan {

enum class Decision { Converges, Diverges, Inconclusive };

enum class Theorem {
  RatioTest,           // s_n from a_n / a_{n+1}
  RootTest,            // s_n from a_n^(-1/n)
  NecessarySufficient, // index-set criterion with the root measurement
  RatioSufficient,     // index-set sufficiency with the ratio measurement
  RatioFallback,       // envelope hypothesis failed; ratio-mode escalation used
};

const char* to_string(Decision d);
const char* to_string(Theorem t);

struct ClassifierConfig {
  double decision_margin = 0.05;
  /// Levels are evaluated only where ln_(K) n > safety_margin.
  double safety_margin = 0.1;
  TraceOptions trace{};
  std::vector<double> c_grid{1.01, 1.1, 1.25, 1.5, 2.0, 3.0};
  int level_cap = kMaxLevel;
  IndexSetConfig index{};
  /// Also escalate when the extrapolated limit of s_n lies within the margin of 1.
  bool extrapolate = true;
  /// Keep full s-traces in verdicts (needed for CSV output).
  bool keep_traces = false;
};

/// Evidence from the windowed liminf/limsup of one trace.
struct TailCertificate {
  MeasureMode mode = MeasureMode::Ratio;
  int level = 0;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  std::int64_t window_first = 0;
  std::int64_t window_last = 0;
  std::size_t window_samples = 0;
  std::optional<double> extrapolated_limit;
};

/// Summary of one (K, c) membership set.
struct IndexCell {
  int level = 0;
  double c = 0.0;
  IndexSetClass cls = IndexSetClass::Undecided;
  double density = 0.0;
  std::int64_t defect = 0;
  std::int64_t members = 0;
};

struct Verdict {
  Decision decision = Decision::Inconclusive;
  Theorem theorem = Theorem::RatioTest;
  int level = 0;
  std::int64_t horizon = 0;
  double decision_margin = 0.0;
  double safety_margin = 0.0;
  std::optional<TailCertificate> tail;
  std::optional<IndexCell> index;
  /// Every (K, c) cell evaluated by the index-set procedures.
  std::vector<IndexCell> grid;
  std::optional<EnvelopeFit> envelope;
  std::vector<SLevelTrace> traces;
  std::vector<std::string> notes;
};

enum class StepOutcome { Decided, NearOneEscalate, DomainExhausted, Undecided };

const char* to_string(StepOutcome o);

struct EscalationStep {
  int level = 0;
  StepOutcome outcome = StepOutcome::Decided;
  std::optional<TailCertificate> summary;
};

struct EscalationPath {
  std::vector<EscalationStep> steps;
};

Verdict classify_ratio(const TermStream& ts, const BertrandLevel& level, const ClassifierConfig& config = {});
Verdict classify_root(const TermStream& ts, const BertrandLevel& level, const ClassifierConfig& config = {});

struct EscalationResult {
  Verdict verdict;
  EscalationPath path;
};

EscalationResult auto_escalate(const TermStream& ts, MeasureMode mode, const ClassifierConfig& config = {});

/// Falls back to ratio-mode auto_escalate (Theorem::RatioFallback) when
/// envelope_fit throws NoEnvelopeError.
Verdict classify_necsuf(const TermStream& ts, const ClassifierConfig& config = {});

/// Throws MonotonicityError unless the stream is flagged nonincreasing.
Verdict classify_ratio_sufficient(const TermStream& ts, const ClassifierConfig& config = {});

/// Ratio-form sufficiency from ratios supplied directly: ratio_minus_one[i] is
/// a_n / a_{n+1} - 1 at n = first + i. The caller vouches for monotonicity.
Verdict classify_ratio_sufficient(std::int64_t first, std::span<const double> ratio_minus_one,
                                  const ClassifierConfig& config = {});

/// Membership mask over [1, horizon] of {n : s_n >= c} at one level, where s
/// comes from the given measurements (measurement - 1 at n = first + i).
/// Indices outside the supplied range are non-members.
std::vector<std::uint8_t> threshold_membership(const BertrandLevel& level, std::int64_t first,
                                               std::span<const double> measurement_minus_one, double c,
                                               std::int64_t horizon);

}  // namespace demorgan
