#pragma once

// Fixture generators with known convergence behaviour. Every generator is a
// pure function of its parameters and index range.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "demorgan/series.hpp"

namespace demorgan {

enum class Truth { Converges, Diverges, Boundary, Unknown };

const char* to_string(Truth t);

/// Inclusive index range [first, last].
struct IndexRange {
  std::int64_t first = 1;
  std::int64_t last = 1;

  std::size_t size() const { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
};

/// Alternating HIGH/LOW index blocks starting at n0.
struct Table1Schedule {
  enum class Pattern {
    GrowingBlocks,  // lengths 1,1,2,2,3,3,... beginning with a HIGH block
    EvenOdd,        // HIGH exactly on even indices
  };

  std::int64_t n0 = 17;
  double C = 2.0;
  Pattern pattern = Pattern::GrowingBlocks;

  /// Indices below n0 are LOW.
  bool is_high(std::int64_t n) const;
  /// mask[n - 1] = is_high(n) for n = 1 .. horizon.
  std::vector<std::uint8_t> membership(std::int64_t horizon) const;
};

enum class EpsKind {
  Zero,
  COverLog,    // C / ln_(K+1) n, C > 1
  OneOverLog,  // 1 / ln_(K+1) n
  Scheduled,   // 2C / ln_(K+1) n on HIGH blocks, 0 on LOW blocks
};

const char* to_string(EpsKind kind);

/// The planted coefficient s_n.
struct SFunction {
  enum class Kind { Constant, OnePlusEps };

  Kind kind = Kind::Constant;
  double s = 1.0;
  EpsKind eps = EpsKind::Zero;
  double C = 2.0;
  Table1Schedule schedule{};

  static SFunction constant(double s);
  /// Throws DomainError for COverLog with C <= 1.
  static SFunction one_plus_eps(EpsKind eps, double C = 2.0);
  static SFunction scheduled(const Table1Schedule& schedule);

  /// Whether evaluating s_n at level K needs ln_(K+1) n.
  bool uses_next_level() const { return kind == Kind::OnePlusEps && eps != EpsKind::Zero; }
  /// s_n for a level-K plant.
  double value(int K, std::int64_t n) const;
};

/// a_n = e^-1 n^-s_n (K = 1) or e^-1 / (n prod_{k<=K-2} ln_(k) n * ln_(K-1)(n)^s_n).
TermStream closed_form_terms(int K, const SFunction& s, IndexRange range);

/// a_n = (baseline_K(n) + s_n / denom_K(n))^-n. NegativeBaseError when the base is not positive.
TermStream from_root(int K, const SFunction& s, IndexRange range);

/// a_first = a_start, a_{n+1} = a_n / (baseline_K(n) + s_n / denom_K(n)).
TermStream from_ratio(int K, const SFunction& s, double a_start, IndexRange range);

/// from_root with s_n = 1 + eps_n.
TermStream boundary_family(int K, EpsKind eps, IndexRange range, double C = 2.0);

struct ScheduledStream {
  TermStream stream;
  /// high[n - 1] marks HIGH indices for n = 1 .. range.last.
  std::vector<std::uint8_t> high;
};

/// Boundary stream whose eps_n switches between HIGH and LOW blocks.
ScheduledStream table1_schedule_stream(int K, const Table1Schedule& schedule, IndexRange range);

/// a_{2k-1} = a_{2k} = closed_form_terms(K, s = c) evaluated at k. Every even
/// step then has a_n / a_{n+1} above the level-K threshold with coefficient c,
/// every odd step has ratio 1.
TermStream paired_counterexample(int K, double c, IndexRange range);

/// Level in force from index `from` onwards.
struct LevelStep {
  std::int64_t from = 1;
  int K = 1;
};

struct DivergentCase {
  enum class Kind { I, II };
  Kind kind = Kind::I;
  int K = 1;
  /// Case I coefficient; must be <= 1.
  double c_star = 1.0;
  /// Case II step map; empty selects default_step_map.
  std::vector<LevelStep> steps;
};

/// Level K starts at range.first and moves to K+1 at min_domain(K+1, margin),
/// up to kMaxLevel and while inside the range.
std::vector<LevelStep> default_step_map(IndexRange range, double margin = 0.1);

/// Case I: from_root with s = c*. Case II: from_root with s = 1 at the level
/// the step map assigns to each index. StepError for a malformed step map.
TermStream divergent_case_terms(const DivergentCase& spec, IndexRange range);

/// Largest |extracted s_n - planted s_n| over the range.
double max_plant_error(const TermStream& ts, int K, const SFunction& s, MeasureMode mode);

enum class Generator { ClosedForm, FromRoot, FromRatio, Boundary, Table1, Paired, DivergentCase };

const char* to_string(Generator g);

/// Convergence of the generated series as n -> infinity.
Truth generator_truth(Generator g, int K, const SFunction& s, double c = 0.0);

}  // namespace demorgan
