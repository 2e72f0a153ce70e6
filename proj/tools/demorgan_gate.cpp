// demorgan-gate: classify series, generate fixtures, classify birth-death chains.
//
// Exit codes: 0 decided, 2 inconclusive, 1 error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "demorgan/bdp.hpp"
#include "demorgan/catalog.hpp"
#include "demorgan/classifier.hpp"
#include "demorgan/errors.hpp"
#include "demorgan/io.hpp"
#include "demorgan/report.hpp"
#include "demorgan/synth.hpp"

using namespace demorgan;

namespace {

constexpr int kExitDecided = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

// Config files may be flat key=value lists; flat keys belong to the subcommand
// being run. [section] headers and dotted keys keep their usual meaning.
class FlatConfig : public CLI::ConfigTOML {
 public:
  explicit FlatConfig(std::string section) : section_(std::move(section)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    if (section_.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents.push_back(section_);
    }
    return items;
  }

 private:
  std::string section_;
};

// Accepts integers written in exponent form ("1e6").
std::int64_t parse_count(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v) || v < 1.0 || v != std::floor(v) || v > 9.0e18) {
    throw ConfigError(std::string(what) + " must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(v);
}

IndexRange parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("range must look like lo:hi, got '" + text + "'");
  IndexRange r{parse_count(text.substr(0, colon), "range start"), parse_count(text.substr(colon + 1), "range end")};
  if (r.last < r.first) throw ConfigError("range end precedes its start");
  return r;
}

int exit_code(Decision d) { return d == Decision::Inconclusive ? kExitInconclusive : kExitDecided; }
int exit_code(BdpDecision d) { return d == BdpDecision::Inconclusive ? kExitInconclusive : kExitDecided; }

void emit_report(const report::Json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  io::write_file_atomic(path, text);
  std::cout << report::summarize(doc) << "report: " << path << "\n";
}

struct ClassifyOptions {
  std::string family;
  double param = 2.0;
  std::string terms;
  std::string horizon;
  std::string method = "auto";
  int level = 1;
  int level_cap = kMaxLevel;
  double margin = 0.05;
  double safety_margin = 0.1;
  std::vector<double> c_grid;
  double tail_fraction = 0.25;
  bool no_extrapolate = false;
  std::string report_path;
  std::string trace_path;
  bool no_timestamp = false;
};

int run_classify(const ClassifyOptions& o) {
  if (!(o.margin > 0.0) || !(o.safety_margin > 0.0)) throw ConfigError("margins must be > 0");
  if (!(o.tail_fraction > 0.0 && o.tail_fraction <= 1.0)) throw ConfigError("tail fraction must be in (0, 1]");

  TermStream ts;
  if (!o.terms.empty()) {
    ts = io::read_terms_jsonl(o.terms);
    if (!o.horizon.empty()) ts = ts.truncated(parse_count(o.horizon, "horizon"));
  } else if (!o.family.empty()) {
    ts = catalog_stream(o.family, o.param, o.horizon.empty() ? 1000000 : parse_count(o.horizon, "horizon"));
  } else {
    throw ConfigError("classify needs --family or --terms");
  }
  if (ts.last_index() < 1000) {
    throw ConfigError("horizon must be at least 1000, stream ends at n = " + std::to_string(ts.last_index()));
  }

  ClassifierConfig cfg;
  cfg.decision_margin = o.margin;
  cfg.safety_margin = o.safety_margin;
  cfg.level_cap = o.level_cap;
  cfg.trace.tail_fraction = o.tail_fraction;
  cfg.index.tail_fraction = o.tail_fraction;
  cfg.extrapolate = !o.no_extrapolate;
  cfg.keep_traces = !o.trace_path.empty();
  if (!o.c_grid.empty()) cfg.c_grid = o.c_grid;

  Verdict v;
  std::optional<EscalationPath> path;
  if (o.method == "auto" || o.method == "auto-root") {
    auto r = auto_escalate(ts, o.method == "auto" ? MeasureMode::Ratio : MeasureMode::Root, cfg);
    v = std::move(r.verdict);
    path = std::move(r.path);
  } else if (o.method == "ratio") {
    v = classify_ratio(ts, BertrandLevel(o.level), cfg);
  } else if (o.method == "root") {
    v = classify_root(ts, BertrandLevel(o.level), cfg);
  } else if (o.method == "necsuf") {
    v = classify_necsuf(ts, cfg);
  } else if (o.method == "ratio-sufficient") {
    v = classify_ratio_sufficient(ts, cfg);
  } else {
    throw ConfigError("unknown method '" + o.method + "'");
  }

  report::ReportOptions ro;
  if (!o.trace_path.empty()) {
    io::write_file_atomic(o.trace_path, report::trace_csv(v.traces));
    ro.traces_path = o.trace_path;
  }
  if (path) ro.escalation = &*path;
  if (!o.no_timestamp) ro.generated_at = report::utc_timestamp();
  emit_report(report::verdict_json(v, ro), o.report_path);
  return exit_code(v.decision);
}

struct SynthOptions {
  bool from_root = false, from_ratio = false, closed_form = false, boundary = false, table1 = false, paired = false;
  std::string divergent_case;
  int K = 1;
  double s = 1.5;
  std::string eps = "zero";
  double C = 2.0;
  std::int64_t n0 = 17;
  std::string pattern = "blocks";
  double c = 2.0;
  double c_star = 0.5;
  double a_start = 1.0;
  std::string range;
  std::string out = "synth";
};

EpsKind parse_eps(const std::string& name) {
  if (name == "zero") return EpsKind::Zero;
  if (name == "c_over_log") return EpsKind::COverLog;
  if (name == "one_over_log") return EpsKind::OneOverLog;
  throw ConfigError("unknown eps kind '" + name + "'");
}

int run_synth(const SynthOptions& o) {
  const int chosen = o.from_root + o.from_ratio + o.closed_form + o.boundary + o.table1 + o.paired +
                     !o.divergent_case.empty();
  if (chosen > 1) throw ConfigError("choose one generator");
  if (o.K > kMaxLevel) {
    throw OverflowError("level " + std::to_string(o.K) + " exceeds the supported maximum " +
                        std::to_string(kMaxLevel));
  }
  if (o.K < 1) throw DomainError("level must be >= 1");

  const EpsKind eps = parse_eps(o.eps);
  SFunction sf = eps == EpsKind::Zero && !o.boundary ? SFunction::constant(o.s) : SFunction::one_plus_eps(eps, o.C);
  Table1Schedule schedule{o.n0, o.C, Table1Schedule::Pattern::GrowingBlocks};
  if (o.pattern == "even-odd") {
    schedule.pattern = Table1Schedule::Pattern::EvenOdd;
  } else if (o.pattern != "blocks") {
    throw ConfigError("unknown pattern '" + o.pattern + "'");
  }

  Generator gen = Generator::FromRoot;
  if (o.from_ratio) gen = Generator::FromRatio;
  if (o.closed_form) gen = Generator::ClosedForm;
  if (o.boundary) gen = Generator::Boundary;
  if (o.table1) {
    gen = Generator::Table1;
    sf = SFunction::scheduled(schedule);
  }
  if (o.paired) gen = Generator::Paired;
  if (!o.divergent_case.empty()) gen = Generator::DivergentCase;

  IndexRange range;
  if (!o.range.empty()) {
    range = parse_range(o.range);
  } else {
    std::int64_t first = min_domain(sf.uses_next_level() ? o.K + 1 : o.K);
    if (gen == Generator::Table1) first = std::max(first, o.n0);
    if (gen == Generator::Paired) first = 2 * min_domain(o.K) - 1;
    range = {first, 100000};
  }

  report::Json params{{"K", o.K}};
  TermStream ts;
  std::vector<std::uint8_t> membership;
  std::optional<MeasureMode> plant_mode;
  switch (gen) {
    case Generator::FromRoot:
    case Generator::Boundary:
      ts = from_root(o.K, sf, range);
      plant_mode = MeasureMode::Root;
      break;
    case Generator::FromRatio:
      ts = from_ratio(o.K, sf, o.a_start, range);
      plant_mode = MeasureMode::Ratio;
      params["a_start"] = o.a_start;
      break;
    case Generator::ClosedForm:
      ts = closed_form_terms(o.K, sf, range);
      break;
    case Generator::Table1: {
      auto sched = table1_schedule_stream(o.K, schedule, range);
      ts = std::move(sched.stream);
      membership = std::move(sched.high);
      plant_mode = MeasureMode::Root;
      params["n0"] = o.n0;
      params["pattern"] = o.pattern;
      break;
    }
    case Generator::Paired:
      ts = paired_counterexample(o.K, o.c, range);
      params["c"] = o.c;
      break;
    case Generator::DivergentCase: {
      DivergentCase dc;
      dc.K = o.K;
      if (o.divergent_case == "I") {
        dc.kind = DivergentCase::Kind::I;
        dc.c_star = o.c_star;
        params["c_star"] = o.c_star;
      } else if (o.divergent_case == "II") {
        dc.kind = DivergentCase::Kind::II;
        report::Json steps = report::Json::array();
        for (const auto& st : default_step_map(range)) steps.push_back({{"from", st.from}, {"K", st.K}});
        params["steps"] = steps;
      } else {
        throw ConfigError("divergent case must be I or II");
      }
      ts = divergent_case_terms(dc, range);
      params["case"] = o.divergent_case;
      break;
    }
  }
  if (gen != Generator::Paired && gen != Generator::DivergentCase) {
    if (sf.kind == SFunction::Kind::Constant) {
      params["s"] = o.s;
    } else {
      params["eps"] = to_string(sf.eps);
      params["C"] = o.C;
    }
  }

  report::Json meta;
  meta["generator"] = to_string(gen);
  meta["parameters"] = params;
  meta["truth"] = to_string(generator_truth(gen, o.K, sf, o.c));
  meta["range"] = {range.first, range.last};
  if (plant_mode) {
    const double err = max_plant_error(ts, o.K, sf, *plant_mode);
    meta["roundtrip_verified"] = err <= 1e-9;
    meta["roundtrip_max_error"] = err;
  } else {
    meta["roundtrip_verified"] = nullptr;
  }

  const std::string stream_path = o.out + ".jsonl";
  const std::string meta_path = o.out + ".meta.json";
  io::write_file_atomic(stream_path, io::terms_jsonl(ts));
  if (!membership.empty()) {
    std::string csv = "n,high\n";
    for (std::int64_t n = range.first; n <= range.last; ++n) {
      csv += std::to_string(n) + "," + (membership[n - 1] ? "1" : "0") + "\n";
    }
    const std::string membership_path = o.out + ".membership.csv";
    io::write_file_atomic(membership_path, csv);
    meta["membership_path"] = membership_path;
  }
  meta["stream_path"] = stream_path;
  io::write_file_atomic(meta_path, meta.dump(2) + "\n");
  std::cout << "wrote " << stream_path << " and " << meta_path << "\n";
  return kExitDecided;
}

struct BdpOptions {
  std::string rates;
  std::string family;
  double lambda = 1.0;
  double mu = 2.0;
  std::string horizon;
  std::vector<std::string> simulate;
  std::uint64_t seed = 0;
  double margin = 0.05;
  double safety_margin = 0.1;
  std::string report_path;
  bool no_timestamp = false;
};

int run_bdp(const BdpOptions& o) {
  BdpRates rates;
  if (!o.rates.empty()) {
    rates = io::read_rates_csv(o.rates);
  } else if (!o.family.empty()) {
    rates = bdp_family(o.family, o.horizon.empty() ? 100000 : parse_count(o.horizon, "horizon"), o.lambda, o.mu);
  } else {
    throw ConfigError("bdp needs --rates or --family");
  }
  ClassifierConfig cfg;
  cfg.decision_margin = o.margin;
  cfg.safety_margin = o.safety_margin;

  BdpVerdict v = classify_bdp(rates, cfg);
  if (!o.simulate.empty()) {
    if (o.simulate.size() != 2) throw ConfigError("--simulate takes TRIALS CAP");
    v.simulation = simulate_bdp(rates, parse_count(o.simulate[0], "trials"), parse_count(o.simulate[1], "cap"), o.seed);
  }
  report::ReportOptions ro;
  if (!o.no_timestamp) ro.generated_at = report::utc_timestamp();
  emit_report(report::bdp_json(v, ro), o.report_path);
  return exit_code(v.decision);
}

int run_report(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) throw Error("cannot open " + in_path);
  report::Json doc;
  try {
    doc = report::Json::parse(in);
  } catch (const report::Json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  std::cout << report::summarize(doc);
  const auto decision = doc.value("decision", std::string("INCONCLUSIVE"));
  return decision == "INCONCLUSIVE" ? kExitInconclusive : kExitDecided;
}

std::string active_subcommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "classify" || a == "synth" || a == "bdp" || a == "report") return a;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence tests on the iterated-logarithm scale"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override it");
  app.config_formatter(std::make_shared<FlatConfig>(active_subcommand(argc, argv)));

  ClassifyOptions co;
  auto* classify = app.add_subcommand("classify", "Classify a series");
  classify->fallthrough();
  classify->add_option("--family", co.family, "Builtin family (harmonic, power, one_over_n_logsq, log_power, loglog_power, geometric)");
  classify->add_option("--param", co.param, "Family parameter (p or q)");
  classify->add_option("--terms", co.terms, "JSONL stream {\"n\", \"ln_a\"|\"a\"}");
  classify->add_option("--horizon", co.horizon, "Last index (accepts 1e6)");
  classify->add_option("--method", co.method, "auto | auto-root | ratio | root | necsuf | ratio-sufficient")->capture_default_str();
  classify->add_option("--level", co.level, "Level for --method ratio|root")->capture_default_str();
  classify->add_option("--level-cap", co.level_cap, "Highest level tried")->capture_default_str();
  classify->add_option("--margin", co.margin, "Decision margin around 1")->capture_default_str();
  classify->add_option("--safety-margin", co.safety_margin, "Require ln_(K) n above this")->capture_default_str();
  classify->add_option("--c-grid", co.c_grid, "Thresholds c > 1 for the index-set methods");
  classify->add_option("--tail-fraction", co.tail_fraction, "Tail window fraction")->capture_default_str();
  classify->add_flag("--no-extrapolate", co.no_extrapolate, "Escalate only on the tail window");
  classify->add_option("--report", co.report_path, "JSON report path (stdout if omitted)");
  classify->add_option("--trace", co.trace_path, "CSV s-trace path (n,K,s)");
  classify->add_flag("--no-timestamp", co.no_timestamp, "Omit generated_at");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate a fixture stream");
  synth->fallthrough();
  synth->add_flag("--from-root", so.from_root, "a_n = (baseline + s/denom)^-n");
  synth->add_flag("--from-ratio", so.from_ratio, "a_n / a_{n+1} = baseline + s/denom");
  synth->add_flag("--closed-form", so.closed_form, "Closed-form level-K terms");
  synth->add_flag("--boundary", so.boundary, "Root plant with s = 1 + eps");
  synth->add_flag("--table1", so.table1, "Scheduled HIGH/LOW eps blocks");
  synth->add_flag("--paired", so.paired, "Paired counterexample a_{2k-1} = a_{2k}");
  synth->add_option("--divergent-case", so.divergent_case, "I or II");
  synth->add_option("--K", so.K, "Level")->capture_default_str();
  synth->add_option("--s", so.s, "Constant planted s")->capture_default_str();
  synth->add_option("--eps", so.eps, "zero | c_over_log | one_over_log")->capture_default_str();
  synth->add_option("--C", so.C, "Constant in C / ln_(K+1) n")->capture_default_str();
  synth->add_option("--n0", so.n0, "Schedule start")->capture_default_str();
  synth->add_option("--pattern", so.pattern, "blocks | even-odd")->capture_default_str();
  synth->add_option("--c", so.c, "Paired counterexample exponent")->capture_default_str();
  synth->add_option("--c-star", so.c_star, "Case I coefficient")->capture_default_str();
  synth->add_option("--a-start", so.a_start, "First term for --from-ratio")->capture_default_str();
  synth->add_option("--range", so.range, "lo:hi");
  synth->add_option("--out", so.out, "Output prefix")->capture_default_str();

  BdpOptions bo;
  auto* bdp = app.add_subcommand("bdp", "Classify a birth-death chain");
  bdp->fallthrough();
  bdp->add_option("--rates", bo.rates, "CSV with header n,lambda,mu");
  bdp->add_option("--family", bo.family, "constant | equal | telescoping | log_boundary | log_drift");
  bdp->add_option("--lambda", bo.lambda, "Birth rate for the constant family")->capture_default_str();
  bdp->add_option("--mu", bo.mu, "Death rate for the constant family")->capture_default_str();
  bdp->add_option("--horizon", bo.horizon, "Number of states for a family (accepts 1e5)");
  bdp->add_option("--simulate", bo.simulate, "TRIALS CAP")->expected(2);
  bdp->add_option("--seed", bo.seed, "Simulation seed")->capture_default_str();
  bdp->add_option("--margin", bo.margin, "Decision margin around 1")->capture_default_str();
  bdp->add_option("--safety-margin", bo.safety_margin, "Require ln_(K) n above this")->capture_default_str();
  bdp->add_option("--report", bo.report_path, "JSON report path (stdout if omitted)");
  bdp->add_flag("--no-timestamp", bo.no_timestamp, "Omit generated_at");

  std::string report_in;
  auto* rep = app.add_subcommand("report", "Summarize a JSON report");
  rep->add_option("--in", report_in, "Report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (classify->parsed()) return run_classify(co);
    if (synth->parsed()) return run_synth(so);
    if (bdp->parsed()) return run_bdp(bo);
    return run_report(report_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
