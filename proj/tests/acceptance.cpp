// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "demorgan/bdp.hpp"
#include "demorgan/catalog.hpp"
#include "demorgan/classifier.hpp"
#include "demorgan/iterlog.hpp"
#include "demorgan/series.hpp"
#include "demorgan/synth.hpp"

namespace fs = std::filesystem;
using namespace demorgan;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Truth truth_of(Decision d) {
  switch (d) {
    case Decision::Converges: return Truth::Converges;
    case Decision::Diverges: return Truth::Diverges;
    default: return Truth::Unknown;
  }
}

constexpr std::int64_t kMillion = 1000000;

Outcome catalog_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out{true, ""};
  int wrong = 0;
  for (const auto& e : analytic_catalog()) {
    const auto ts = catalog_stream(e.family, e.param, kMillion);
    const Verdict v = classify_necsuf(ts);
    const Truth got = truth_of(v.decision);
    const bool ok = e.boundary ? (got == e.truth || got == Truth::Unknown) : got == e.truth;
    if (!ok) {
      ++wrong;
      out.detail += fmt(" %s->%s(K=%d,%s)", e.name.c_str(), to_string(v.decision), v.level, to_string(v.theorem));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.pass = wrong == 0 && secs <= 60.0;
  out.detail = fmt("%d wrong, %.1f s;", wrong, secs) + out.detail;
  return out;
}

Outcome plant_roundtrip() {
  double worst = 0.0;
  std::string where;
  for (int K = 1; K <= 3; ++K) {
    const IndexRange range{min_domain(K, 0.1), 100000};
    for (const double s : {-2.0, 0.0, 0.5, 1.0, 1.5, 3.0}) {
      const SFunction sf = SFunction::constant(s);
      const double root_err = max_plant_error(from_root(K, sf, range), K, sf, MeasureMode::Root);
      const double ratio_err = max_plant_error(from_ratio(K, sf, 1.0, range), K, sf, MeasureMode::Ratio);
      if (root_err > worst) {
        worst = root_err;
        where = fmt("from_root K=%d s=%g", K, s);
      }
      if (ratio_err > worst) {
        worst = ratio_err;
        where = fmt("from_ratio K=%d s=%g", K, s);
      }
    }
  }
  return {worst <= 1e-9, fmt("max |s error| %.3g at %s", worst, where.c_str())};
}

Outcome escalation_identity() {
  int triples = 0;
  double worst = 0.0;
  const std::vector<double> eps_grid{-0.9, -0.5, -0.25, -0.1, -1e-3, -1e-6, 0.0, 1e-6, 1e-3, 0.1, 0.25, 0.5, 1.0, 3.0};
  for (int K = 1; K <= 3; ++K) {
    const BertrandLevel lv(K);
    const double lo = std::log(static_cast<double>(min_domain(K + 1, 0.1)));
    const double hi = std::log(1e15);
    for (int i = 0; i < 25; ++i) {
      const auto n = static_cast<std::int64_t>(std::ceil(std::exp(lo + (hi - lo) * i / 24.0)));
      for (const double eps : eps_grid) {
        const double left = baseline_excess(lv, n) + (1.0 + eps) / denom(lv, n);
        const double right = baseline_excess(lv.next(), n) + escalate_excess(lv, n, eps) / denom(lv.next(), n);
        worst = std::max(worst, std::abs(left - right) / std::abs(left));
        ++triples;
      }
    }
  }
  return {triples >= 1000 && worst <= 1e-12, fmt("%d triples, max relative gap %.3g", triples, worst)};
}

Outcome root_constant() {
  const auto ts = from_root(1, SFunction::constant(2.0), {100, kMillion});
  std::int64_t violations = 0;
  double worst_scaled = 0.0;
  for (std::int64_t n = 100; n <= kMillion; ++n) {
    const double x = ts.log_term(n).value() + 2.0 * std::log(static_cast<double>(n)) + 1.0;
    const double dev = std::abs(std::expm1(x));
    if (dev > 10.0 / static_cast<double>(n)) ++violations;
    worst_scaled = std::max(worst_scaled, dev * static_cast<double>(n));
  }
  const double at_end = std::expm1(ts.log_term(kMillion).value() + 2.0 * std::log(1e6) + 1.0);
  return {violations == 0, fmt("%lld violations, max n*|a_n n^2 e - 1| %.3g, value at 1e6 %.6g",
                               static_cast<long long>(violations), worst_scaled, at_end)};
}

Outcome escalation_behavior() {
  ClassifierConfig cfg;
  cfg.decision_margin = 0.05;
  const auto a = auto_escalate(catalog_stream("log_power", 1.0, kMillion), MeasureMode::Ratio, cfg).verdict;
  const auto b = auto_escalate(catalog_stream("loglog_power", 2.0, kMillion), MeasureMode::Ratio, cfg).verdict;
  const bool pass = a.decision == Decision::Diverges && a.level == 2 && b.decision == Decision::Converges &&
                    b.level == 2;
  return {pass, fmt("1/(n ln n): %s at K=%d; 1/(n ln n (ln ln n)^2): %s at K=%d", to_string(a.decision), a.level,
                    to_string(b.decision), b.level)};
}

Outcome paired_separation() {
  const auto ts = paired_counterexample(1, 2.0, {3, kMillion});
  const Verdict v = classify_necsuf(ts);
  std::vector<double> m1;
  m1.reserve(kMillion);
  for (std::int64_t n = ts.start_index(); n < ts.last_index(); ++n) m1.push_back(ratio_minus_one(ts, n));
  const auto mask = threshold_membership(BertrandLevel(1), ts.start_index(), m1, 2.0, ts.last_index() - 1);
  const double density = index_set_stats(mask).density_est;
  const bool pass = v.decision == Decision::Converges && density >= 0.45 && density <= 0.55;
  return {pass, fmt("necsuf %s (%s), ratio membership density %.4f", to_string(v.decision), to_string(v.theorem),
                    density)};
}

Outcome index_classes() {
  const auto all = index_set_stats([](std::int64_t) { return true; }, kMillion);
  // Dropping n = ceil(e^j) leaves N(n) = n - floor(ln n).
  const auto log_defect = index_set_stats(
      [](std::int64_t n) {
        const auto j = static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(n))));
        return n != static_cast<std::int64_t>(std::ceil(std::exp(static_cast<double>(j))));
      },
      kMillion);
  const auto even = index_set_stats([](std::int64_t n) { return n % 2 == 0; }, kMillion);
  const bool pass = all.cls == IndexSetClass::StronglyAlmostAll && all.defect_sup_tail == 0 &&
                    log_defect.cls == IndexSetClass::AlmostAll && even.cls == IndexSetClass::DensityBelowOne &&
                    even.alpha >= 0.45 && even.alpha <= 0.55;
  return {pass, fmt("all: %s defect %lld; n - floor(ln n): %s; even: %s alpha %.4f", to_string(all.cls),
                    static_cast<long long>(all.defect_sup_tail), to_string(log_defect.cls), to_string(even.cls),
                    even.alpha)};
}

Outcome bdp_checks() {
  const auto tele = classify_bdp(bdp_family("telescoping", 100000));
  const auto equal = classify_bdp(bdp_family("equal", 100000));
  struct Sim {
    double lambda, mu;
    std::int64_t cap;
  };
  bool sims_ok = true;
  std::string sims;
  for (const Sim& s : {Sim{1.0, 2.0, 1000000}, Sim{2.0, 1.0, 10000}}) {
    const auto est = simulate_bdp(bdp_family("constant", 1000, s.lambda, s.mu), 100000, s.cap, 7);
    const double target = std::min(1.0, s.mu / s.lambda);
    const bool ok = est.ci_low <= target && target <= est.ci_high;
    sims_ok = sims_ok && ok;
    sims += fmt("; lambda=%g mu=%g: %.5f [%.5f, %.5f] vs %g", s.lambda, s.mu, est.return_prob, est.ci_low,
                est.ci_high, target);
  }
  const bool pass = tele.decision == BdpDecision::Transient && equal.decision == BdpDecision::Recurrent && sims_ok;
  return {pass, fmt("telescoping %s, equal %s", to_string(tele.decision), to_string(equal.decision)) + sims};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int gate(const fs::path& dir, const std::string& args) {
  const std::string cmd =
      "cd '" + dir.string() + "' && '" + DEMORGAN_GATE_BIN + "' " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / fmt("demorgan-acceptance-%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> runs{
      "bdp --family constant --lambda 2 --mu 1 --horizon 1000 --simulate 20000 10000 --seed 7 --no-timestamp",
      "classify --family loglog_power --param 2 --horizon 1e6 --no-timestamp",
  };
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string a = fmt("run%zu_a.json", i);
    const std::string b = fmt("run%zu_b.json", i);
    const int ca = gate(dir, runs[i] + " --report " + a);
    const int cb = gate(dir, runs[i] + " --report " + b);
    const std::string ra = slurp(dir / a);
    const std::string rb = slurp(dir / b);
    const bool same = ca == cb && (ca == 0 || ca == 2) && !ra.empty() && ra == rb;
    pass = pass && same;
    detail += fmt("%s%s: %zu bytes %s", i ? "; " : "", runs[i].substr(0, runs[i].find(' ')).c_str(), ra.size(),
                  same ? "identical" : "differ");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"catalog soundness", catalog_soundness},
      {"plant/extract round-trip", plant_roundtrip},
      {"escalation identity", escalation_identity},
      {"root-plant constant", root_constant},
      {"escalation behavior", escalation_behavior},
      {"paired counterexample separation", paired_separation},
      {"index-set classes", index_classes},
      {"birth-death processes", bdp_checks},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
