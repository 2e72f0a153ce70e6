#include "demorgan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "demorgan/errors.hpp"
#include "demorgan/numeric.hpp"

namespace demorgan {

const char* to_string(Truth t) {
  switch (t) {
    case Truth::Converges:
      return "CONVERGES";
    case Truth::Diverges:
      return "DIVERGES";
    case Truth::Boundary:
      return "BOUNDARY";
    case Truth::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

const char* to_string(EpsKind kind) {
  switch (kind) {
    case EpsKind::Zero:
      return "zero";
    case EpsKind::COverLog:
      return "c_over_log";
    case EpsKind::OneOverLog:
      return "one_over_log";
    case EpsKind::Scheduled:
      return "scheduled";
  }
  return "zero";
}

const char* to_string(Generator g) {
  switch (g) {
    case Generator::ClosedForm:
      return "closed_form";
    case Generator::FromRoot:
      return "from_root";
    case Generator::FromRatio:
      return "from_ratio";
    case Generator::Boundary:
      return "boundary";
    case Generator::Table1:
      return "table1";
    case Generator::Paired:
      return "paired";
    case Generator::DivergentCase:
      return "divergent_case";
  }
  return "from_root";
}

bool Table1Schedule::is_high(std::int64_t n) const {
  if (n < n0) return false;
  if (pattern == Pattern::EvenOdd) return n % 2 == 0;
  std::int64_t offset = n - n0;
  for (std::int64_t block = 0;; ++block) {
    const std::int64_t length = block / 2 + 1;
    if (offset < length) return block % 2 == 0;
    offset -= length;
  }
}

std::vector<std::uint8_t> Table1Schedule::membership(std::int64_t horizon) const {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
  if (pattern == Pattern::EvenOdd) {
    for (std::int64_t n = std::max<std::int64_t>(n0, 1); n <= horizon; ++n) mask[n - 1] = n % 2 == 0;
    return mask;
  }
  std::int64_t n = n0;
  for (std::int64_t block = 0; n <= horizon; ++block) {
    const std::int64_t length = block / 2 + 1;
    const bool high = block % 2 == 0;
    for (std::int64_t i = 0; i < length && n <= horizon; ++i, ++n) {
      if (n >= 1) mask[n - 1] = high;
    }
  }
  return mask;
}

SFunction SFunction::constant(double s) {
  if (!std::isfinite(s)) throw DomainError("planted s must be finite");
  SFunction f;
  f.kind = Kind::Constant;
  f.s = s;
  return f;
}

SFunction SFunction::one_plus_eps(EpsKind eps, double C) {
  if (eps == EpsKind::COverLog && !(C > 1.0)) {
    throw DomainError("C/ln eps needs C > 1, got " + std::to_string(C));
  }
  SFunction f;
  f.kind = Kind::OnePlusEps;
  f.eps = eps;
  f.C = C;
  return f;
}

SFunction SFunction::scheduled(const Table1Schedule& schedule) {
  if (!(schedule.C > 1.0)) throw DomainError("schedule needs C > 1");
  SFunction f;
  f.kind = Kind::OnePlusEps;
  f.eps = EpsKind::Scheduled;
  f.C = schedule.C;
  f.schedule = schedule;
  return f;
}

double SFunction::value(int K, std::int64_t n) const {
  if (kind == Kind::Constant) return s;
  if (eps == EpsKind::Zero) return 1.0;
  const double next = iter_ln(K + 1, static_cast<double>(n));
  if (next <= 0.0) {
    throw DomainError("ln_(" + std::to_string(K + 1) + ") n is not positive at n = " + std::to_string(n));
  }
  switch (eps) {
    case EpsKind::COverLog:
      return 1.0 + C / next;
    case EpsKind::OneOverLog:
      return 1.0 + 1.0 / next;
    case EpsKind::Scheduled:
      return schedule.is_high(n) ? 1.0 + 2.0 * C / next : 1.0;
    case EpsKind::Zero:
      break;
  }
  return 1.0;
}

namespace {

void check_range(IndexRange range) {
  if (range.first < 1 || range.last < range.first) {
    throw DomainError("invalid index range " + std::to_string(range.first) + ":" + std::to_string(range.last));
  }
}

void check_level(int K) {
  if (K < 1) throw DomainError("level must be >= 1, got " + std::to_string(K));
  if (K > kMaxLevel) {
    throw OverflowError("level " + std::to_string(K) + " exceeds the supported maximum " +
                        std::to_string(kMaxLevel));
  }
}

// First index at which a level-K plant with this s can be evaluated.
std::int64_t plant_domain(int K, const SFunction& s) {
  if (s.uses_next_level()) {
    if (K + 1 > kMaxLevel) throw OverflowError("eps plants at level " + std::to_string(K) + " need level K+1");
    return min_domain(K + 1);
  }
  return min_domain(K);
}

void check_domain(int K, const SFunction& s, IndexRange range, const char* what) {
  const std::int64_t domain = plant_domain(K, s);
  if (range.first < domain) {
    throw DomainError(std::string(what) + " at level " + std::to_string(K) + " needs n >= " + std::to_string(domain) +
                      ", range starts at " + std::to_string(range.first));
  }
}

double closed_form_log(int K, double s, std::int64_t n) {
  const double x = static_cast<double>(n);
  if (K == 1) return -1.0 - s * std::log(x);
  double log_a = -1.0 - std::log(x);
  for (int k = 2; k < K; ++k) log_a -= iter_ln(k, x);
  return log_a - s * iter_ln(K, x);
}

// x = baseline_K(n) - 1 + s / denom_K(n).
double planted_excess(int K, std::int64_t n, double s) {
  const LevelPoint p = evaluate_level(BertrandLevel(K), n);
  return p.baseline_excess + s / p.denom;
}

// ln a_n = -n log1p(x), with the rounding error of the product kept in lo.
void push_root_term(std::int64_t n, double x, std::vector<double>& hi, std::vector<double>& lo) {
  if (!(x > -1.0)) {
    throw NegativeBaseError("planted root value " + std::to_string(1.0 + x) + " is not positive at n = " +
                            std::to_string(n));
  }
  const double L = std::log1p(x);
  const double minus_n = -static_cast<double>(n);
  const double h = minus_n * L;
  hi.push_back(h);
  lo.push_back(std::fma(minus_n, L, -h));
}

}  // namespace

TermStream closed_form_terms(int K, const SFunction& s, IndexRange range) {
  check_level(K);
  check_range(range);
  check_domain(K, s, range, "closed form");
  std::vector<double> hi;
  hi.reserve(range.size());
  for (std::int64_t n = range.first; n <= range.last; ++n) hi.push_back(closed_form_log(K, s.value(K, n), n));
  return TermStream(range.first, std::move(hi));
}

TermStream from_root(int K, const SFunction& s, IndexRange range) {
  check_level(K);
  check_range(range);
  check_domain(K, s, range, "root plant");
  std::vector<double> hi, lo;
  hi.reserve(range.size());
  lo.reserve(range.size());
  for (std::int64_t n = range.first; n <= range.last; ++n) {
    push_root_term(n, planted_excess(K, n, s.value(K, n)), hi, lo);
  }
  return TermStream(range.first, std::move(hi), std::move(lo));
}

TermStream from_ratio(int K, const SFunction& s, double a_start, IndexRange range) {
  check_level(K);
  check_range(range);
  if (!(a_start > 0.0) || !std::isfinite(a_start)) throw DomainError("a_start must be positive and finite");
  // s = 0 needs no denominator, so K = 1 can start at n = 1 where ln n = 0.
  const bool bare = s.kind == SFunction::Kind::Constant && s.s == 0.0;
  if (!bare || K > 1) check_domain(K, s, range, "ratio plant");

  std::vector<double> hi, lo;
  hi.reserve(range.size());
  lo.reserve(range.size());
  numeric::DoubleDouble acc{std::log(a_start), 0.0};
  for (std::int64_t n = range.first;; ++n) {
    hi.push_back(acc.hi);
    lo.push_back(acc.lo);
    if (n == range.last) break;
    double x;
    if (bare && K == 1) {
      x = 1.0 / static_cast<double>(n);
    } else {
      x = planted_excess(K, n, s.value(K, n));
    }
    if (!(x > -1.0)) {
      throw NegativeBaseError("planted ratio " + std::to_string(1.0 + x) + " is not positive at n = " +
                              std::to_string(n));
    }
    acc -= std::log1p(x);
  }
  return TermStream(range.first, std::move(hi), std::move(lo));
}

TermStream boundary_family(int K, EpsKind eps, IndexRange range, double C) {
  if (eps == EpsKind::Scheduled) throw DomainError("scheduled eps needs a Table1Schedule");
  return from_root(K, SFunction::one_plus_eps(eps, C), range);
}

ScheduledStream table1_schedule_stream(int K, const Table1Schedule& schedule, IndexRange range) {
  check_level(K);
  if (K + 1 > kMaxLevel) throw OverflowError("schedule at level " + std::to_string(K) + " needs level K+1");
  const std::int64_t domain = min_domain(K + 1);
  if (schedule.n0 < domain) {
    throw DomainError("schedule n0 = " + std::to_string(schedule.n0) + " is below min_domain(" +
                      std::to_string(K + 1) + ") = " + std::to_string(domain));
  }
  ScheduledStream out;
  out.stream = from_root(K, SFunction::scheduled(schedule), range);
  out.high = schedule.membership(range.last);
  return out;
}

TermStream paired_counterexample(int K, double c, IndexRange range) {
  check_level(K);
  check_range(range);
  if (!(c > 1.0)) throw DomainError("paired counterexample needs c > 1");
  const std::int64_t domain = min_domain(K);
  const std::int64_t first_pair = (range.first + 1) / 2;
  if (first_pair < domain) {
    throw DomainError("paired counterexample at level " + std::to_string(K) + " needs n >= " +
                      std::to_string(2 * domain - 1));
  }
  std::vector<double> hi;
  hi.reserve(range.size());
  for (std::int64_t n = range.first; n <= range.last; ++n) hi.push_back(closed_form_log(K, c, (n + 1) / 2));
  return TermStream(range.first, std::move(hi), {}, true);
}

std::vector<LevelStep> default_step_map(IndexRange range, double margin) {
  std::vector<LevelStep> steps{{range.first, 1}};
  for (int K = 2; K <= kMaxLevel; ++K) {
    std::int64_t start = 0;
    try {
      start = min_domain(K, margin);
    } catch (const OverflowError&) {
      break;
    }
    if (start > range.last) break;
    if (start <= range.first) {
      steps.back().K = K;
    } else {
      steps.push_back({start, K});
    }
  }
  return steps;
}

TermStream divergent_case_terms(const DivergentCase& spec, IndexRange range) {
  check_range(range);
  if (spec.kind == DivergentCase::Kind::I) {
    if (spec.c_star > 1.0) throw DomainError("case I needs c* <= 1");
    return from_root(spec.K, SFunction::constant(spec.c_star), range);
  }

  const std::vector<LevelStep> steps = spec.steps.empty() ? default_step_map(range) : spec.steps;
  if (steps.front().from > range.first) {
    throw StepError("step map starts at " + std::to_string(steps.front().from) + ", after the range start");
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    check_level(steps[i].K);
    if (i > 0 && (steps[i].from <= steps[i - 1].from || steps[i].K < steps[i - 1].K)) {
      throw StepError("step map must be increasing in n and nondecreasing in K");
    }
    const std::int64_t effective = std::max(steps[i].from, range.first);
    const std::int64_t domain = min_domain(steps[i].K);
    if (effective < domain) {
      throw StepError("step to level " + std::to_string(steps[i].K) + " at n = " + std::to_string(effective) +
                      " precedes its domain start " + std::to_string(domain));
    }
  }

  std::vector<double> hi, lo;
  hi.reserve(range.size());
  lo.reserve(range.size());
  std::size_t current = 0;
  for (std::int64_t n = range.first; n <= range.last; ++n) {
    while (current + 1 < steps.size() && steps[current + 1].from <= n) ++current;
    push_root_term(n, planted_excess(steps[current].K, n, 1.0), hi, lo);
  }
  return TermStream(range.first, std::move(hi), std::move(lo));
}

double max_plant_error(const TermStream& ts, int K, const SFunction& s, MeasureMode mode) {
  const BertrandLevel level(K);
  const std::int64_t first = std::max(ts.start_index(), plant_domain(K, s));
  const std::int64_t last = mode == MeasureMode::Ratio ? ts.last_index() - 1 : ts.last_index();
  double worst = 0.0;
  for (std::int64_t n = first; n <= last; ++n) {
    const double m1 = mode == MeasureMode::Ratio ? ratio_minus_one(ts, n) : root_minus_one(ts, n);
    const double err = std::fabs(extract_s_from_excess(level, n, m1) - s.value(K, n));
    if (!(err <= worst)) worst = err;  // NaN propagates as the worst error
  }
  return worst;
}

Truth generator_truth(Generator g, int /*K*/, const SFunction& s, double c) {
  const bool constant = s.kind == SFunction::Kind::Constant;
  switch (g) {
    case Generator::ClosedForm:
      if (constant) return s.s > 1.0 ? Truth::Converges : Truth::Diverges;
      if (s.eps == EpsKind::Zero) return Truth::Diverges;
      // n^-(1 + eps_n) with eps_n ~ 1/ln_(K+1) n still sums: exp(-v / ln v) is integrable in v.
      return s.eps == EpsKind::Scheduled ? Truth::Unknown : Truth::Converges;
    case Generator::FromRatio:
      if (constant) return s.s > 1.0 ? Truth::Converges : Truth::Diverges;
      switch (s.eps) {
        case EpsKind::COverLog:
          return Truth::Converges;
        case EpsKind::Scheduled:
          return Truth::Unknown;
        default:
          return Truth::Diverges;
      }
    case Generator::Paired:
      return c > 1.0 ? Truth::Converges : Truth::Diverges;
    case Generator::FromRoot:
    case Generator::Boundary:
    case Generator::Table1:
    case Generator::DivergentCase:
      // (1 + x_n)^-n with n x_n -> 1 tends to e^-1: the terms do not vanish.
      return Truth::Diverges;
  }
  return Truth::Unknown;
}

}  // namespace demorgan
