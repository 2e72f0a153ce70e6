#include "demorgan/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "demorgan/errors.hpp"
#include "demorgan/kernels.hpp"

namespace demorgan {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Converges:
      return "CONVERGES";
    case Decision::Diverges:
      return "DIVERGES";
    case Decision::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::RatioTest:
      return "THEOREM_1_RATIO";
    case Theorem::RootTest:
      return "THEOREM_2_ROOT";
    case Theorem::NecessarySufficient:
      return "THEOREM_3_NECSUF";
    case Theorem::RatioSufficient:
      return "REMARK_1_RATIO_SUFFICIENT";
    case Theorem::RatioFallback:
      return "THEOREM_1_FALLBACK";
  }
  return "THEOREM_1_RATIO";
}

const char* to_string(StepOutcome o) {
  switch (o) {
    case StepOutcome::Decided:
      return "DECIDED";
    case StepOutcome::NearOneEscalate:
      return "NEAR_ONE_ESCALATE";
    case StepOutcome::DomainExhausted:
      return "DOMAIN_EXHAUSTED";
    case StepOutcome::Undecided:
      return "UNDECIDED";
  }
  return "UNDECIDED";
}

namespace {

BertrandLevel effective_level(int K, double level_margin, const ClassifierConfig& config) {
  return BertrandLevel(K, std::max(level_margin, config.safety_margin));
}

TailCertificate certificate_of(const SLevelTrace& trace, bool extrapolate) {
  TailCertificate c;
  c.mode = trace.mode;
  c.level = trace.level.K;
  c.liminf_est = trace.tail_liminf_est;
  c.limsup_est = trace.tail_limsup_est;
  c.window_first = trace.window_first;
  c.window_last = trace.window_last;
  c.window_samples = trace.window_samples;
  if (extrapolate) c.extrapolated_limit = extrapolated_limit(trace);
  return c;
}

Decision decide(const TailCertificate& tail, double margin) {
  if (tail.liminf_est > 1.0 + margin) return Decision::Converges;
  if (tail.limsup_est < 1.0 - margin) return Decision::Diverges;
  return Decision::Inconclusive;
}

Verdict classify_at_level(const TermStream& ts, const BertrandLevel& level, MeasureMode mode,
                          const ClassifierConfig& config) {
  const BertrandLevel lv = effective_level(level.K, level.safety_margin, config);
  SLevelTrace trace = s_trace(ts, lv, mode, config.trace);
  Verdict v;
  v.theorem = mode == MeasureMode::Ratio ? Theorem::RatioTest : Theorem::RootTest;
  v.level = lv.K;
  v.horizon = ts.last_index();
  v.decision_margin = config.decision_margin;
  v.safety_margin = lv.safety_margin;
  v.tail = certificate_of(trace, config.extrapolate);
  v.decision = decide(*v.tail, config.decision_margin);
  if (!ts.monotone_nonincreasing()) v.notes.emplace_back("stream is not nonincreasing");
  // The trace is returned whenever the verdict is silent.
  if (config.keep_traces || v.decision == Decision::Inconclusive) v.traces.push_back(std::move(trace));
  return v;
}

// Every (K, c) membership set for measurements m1[i] at n = first + i.
std::vector<IndexCell> index_grid(std::int64_t first, std::span<const double> m1, const ClassifierConfig& config) {
  std::vector<IndexCell> cells;
  if (m1.empty()) return cells;
  const std::int64_t horizon = first + static_cast<std::int64_t>(m1.size()) - 1;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(horizon));
  std::vector<double> s;
  const int cap = std::min(config.level_cap, kMaxLevel);
  for (int K = 1; K <= cap; ++K) {
    std::int64_t domain = 0;
    try {
      domain = min_domain(K, config.safety_margin);
    } catch (const OverflowError&) {
      break;
    }
    const std::int64_t level_first = std::max(first, domain);
    const std::int64_t count = horizon - level_first + 1;
    if (count < static_cast<std::int64_t>(config.trace.min_tail_samples)) break;

    const auto offset = static_cast<std::size_t>(level_first - first);
    const auto span = m1.subspan(offset, static_cast<std::size_t>(count));
    const kernels::LogColumns logs(level_first, span.size(), K);
    s.resize(span.size());
    kernels::level_coefficients(K, span, logs, s);

    for (const double c : config.c_grid) {
      std::fill(mask.begin(), mask.end(), 0);
      const auto members = kernels::count_at_least(
          s, c, std::span<std::uint8_t>(mask).subspan(static_cast<std::size_t>(level_first - 1), s.size()));
      const IndexSetStats st = index_set_stats(mask, config.index);
      IndexCell cell;
      cell.level = K;
      cell.c = c;
      cell.cls = st.cls;
      cell.density = st.density_est;
      cell.defect = st.defect_sup_tail;
      cell.members = static_cast<std::int64_t>(members);
      cells.push_back(cell);
    }
  }
  return cells;
}

// Smallest K, then largest c, among strongly-almost-all cells.
std::optional<IndexCell> strongest_certificate(const std::vector<IndexCell>& cells) {
  std::optional<IndexCell> best;
  for (const auto& cell : cells) {
    if (cell.cls != IndexSetClass::StronglyAlmostAll) continue;
    if (!best || cell.level < best->level || (cell.level == best->level && cell.c > best->c)) best = cell;
  }
  return best;
}

std::optional<IndexCell> densest_cell(const std::vector<IndexCell>& cells) {
  std::optional<IndexCell> best;
  for (const auto& cell : cells) {
    if (!best || cell.density > best->density) best = cell;
  }
  return best;
}

Verdict grid_verdict(std::vector<IndexCell> cells, Theorem theorem, bool may_diverge, std::int64_t horizon,
                     const ClassifierConfig& config) {
  if (cells.empty()) {
    throw InsufficientDataError("no level has " + std::to_string(config.trace.min_tail_samples) +
                                " indices inside its domain up to n = " + std::to_string(horizon));
  }
  Verdict v;
  v.theorem = theorem;
  v.horizon = horizon;
  v.decision_margin = config.decision_margin;
  v.safety_margin = config.safety_margin;
  if (auto cert = strongest_certificate(cells)) {
    v.decision = Decision::Converges;
    v.level = cert->level;
    v.index = cert;
  } else {
    const bool all_below = std::all_of(cells.begin(), cells.end(), [](const IndexCell& c) {
      return c.cls == IndexSetClass::DensityBelowOne;
    });
    v.decision = (may_diverge && all_below) ? Decision::Diverges : Decision::Inconclusive;
    v.index = densest_cell(cells);
    v.level = v.index ? v.index->level : 0;
    if (!may_diverge && all_below) v.notes.emplace_back("ratio-form membership has density below one; only-if direction does not apply");
    const bool almost_all = std::any_of(cells.begin(), cells.end(), [](const IndexCell& c) {
      return c.cls == IndexSetClass::AlmostAll;
    });
    if (almost_all) v.notes.emplace_back("some membership set is almost-all but not strongly almost-all");
  }
  v.grid = std::move(cells);
  return v;
}

}  // namespace

Verdict classify_ratio(const TermStream& ts, const BertrandLevel& level, const ClassifierConfig& config) {
  return classify_at_level(ts, level, MeasureMode::Ratio, config);
}

Verdict classify_root(const TermStream& ts, const BertrandLevel& level, const ClassifierConfig& config) {
  return classify_at_level(ts, level, MeasureMode::Root, config);
}

EscalationResult auto_escalate(const TermStream& ts, MeasureMode mode, const ClassifierConfig& config) {
  EscalationResult result;
  Verdict& v = result.verdict;
  v.theorem = mode == MeasureMode::Ratio ? Theorem::RatioTest : Theorem::RootTest;
  v.horizon = ts.last_index();
  v.decision_margin = config.decision_margin;
  v.safety_margin = config.safety_margin;
  if (!ts.monotone_nonincreasing()) v.notes.emplace_back("stream is not nonincreasing");

  const double m = config.decision_margin;
  const int cap = std::min(config.level_cap, kMaxLevel);
  for (int K = 1; K <= cap; ++K) {
    EscalationStep step;
    step.level = K;
    std::int64_t first = 0;
    std::int64_t last = -1;
    try {
      std::tie(first, last) = valid_index_range(ts, BertrandLevel(K, config.safety_margin), mode);
    } catch (const OverflowError&) {
    }
    if (last - first + 1 < static_cast<std::int64_t>(config.trace.min_tail_samples)) {
      step.outcome = StepOutcome::DomainExhausted;
      result.path.steps.push_back(step);
      v.notes.emplace_back("level " + std::to_string(K) + " domain starts beyond the horizon");
      break;
    }
    SLevelTrace trace = s_trace(ts, BertrandLevel(K, config.safety_margin), mode, config.trace);
    const TailCertificate tail = certificate_of(trace, config.extrapolate);
    step.summary = tail;
    v.level = K;
    v.tail = tail;
    if (config.keep_traces) v.traces.push_back(std::move(trace));

    const bool window_near_one = tail.liminf_est >= 1.0 - m && tail.limsup_est <= 1.0 + m;
    const bool limit_near_one = tail.extrapolated_limit && std::fabs(*tail.extrapolated_limit - 1.0) <= m;
    if ((window_near_one || limit_near_one) && K < cap) {
      step.outcome = StepOutcome::NearOneEscalate;
      result.path.steps.push_back(step);
      continue;
    }
    v.decision = window_near_one ? Decision::Inconclusive : decide(tail, m);
    step.outcome = v.decision == Decision::Inconclusive ? StepOutcome::Undecided : StepOutcome::Decided;
    result.path.steps.push_back(step);
    return result;
  }
  v.decision = Decision::Inconclusive;
  return result;
}

Verdict classify_necsuf(const TermStream& ts, const ClassifierConfig& config) {
  EnvelopeFit envelope;
  try {
    envelope = envelope_fit(ts);
  } catch (const NoEnvelopeError& e) {
    EscalationResult r = auto_escalate(ts, MeasureMode::Ratio, config);
    r.verdict.theorem = Theorem::RatioFallback;
    r.verdict.notes.insert(r.verdict.notes.begin(), std::string("envelope hypothesis failed: ") + e.what());
    return r.verdict;
  }
  const auto [first, last] = valid_index_range(ts, BertrandLevel(1, config.safety_margin), MeasureMode::Root);
  if (last < first) throw InsufficientDataError("stream ends before the level-1 domain");
  const auto m1 = measurements_minus_one(ts, MeasureMode::Root, first, static_cast<std::size_t>(last - first + 1));
  Verdict v = grid_verdict(index_grid(first, m1, config), Theorem::NecessarySufficient, true, last, config);
  v.envelope = envelope;
  if (!ts.monotone_nonincreasing()) v.notes.emplace_back("stream is not nonincreasing");
  return v;
}

Verdict classify_ratio_sufficient(const TermStream& ts, const ClassifierConfig& config) {
  if (!ts.monotone_nonincreasing()) {
    throw MonotonicityError("ratio-form sufficiency needs a nonincreasing stream");
  }
  const auto [first, last] = valid_index_range(ts, BertrandLevel(1, config.safety_margin), MeasureMode::Ratio);
  if (last < first) throw InsufficientDataError("stream ends before the level-1 domain");
  const auto m1 = measurements_minus_one(ts, MeasureMode::Ratio, first, static_cast<std::size_t>(last - first + 1));
  return classify_ratio_sufficient(first, m1, config);
}

Verdict classify_ratio_sufficient(std::int64_t first, std::span<const double> ratio_minus_one,
                                  const ClassifierConfig& config) {
  const std::int64_t last = first + static_cast<std::int64_t>(ratio_minus_one.size()) - 1;
  return grid_verdict(index_grid(first, ratio_minus_one, config), Theorem::RatioSufficient, false, last, config);
}

std::vector<std::uint8_t> threshold_membership(const BertrandLevel& level, std::int64_t first,
                                               std::span<const double> measurement_minus_one, double c,
                                               std::int64_t horizon) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
  const std::int64_t level_first = std::max(first, min_domain(level));
  const std::int64_t level_last = std::min(horizon, first + static_cast<std::int64_t>(measurement_minus_one.size()) - 1);
  if (level_last < level_first) return mask;
  const auto span = measurement_minus_one.subspan(static_cast<std::size_t>(level_first - first),
                                                  static_cast<std::size_t>(level_last - level_first + 1));
  const kernels::LogColumns logs(level_first, span.size(), level.K);
  std::vector<double> s(span.size());
  kernels::level_coefficients(level.K, span, logs, s);
  kernels::count_at_least(s, c, std::span<std::uint8_t>(mask).subspan(static_cast<std::size_t>(level_first - 1), s.size()));
  return mask;
}

}  // namespace demorgan
