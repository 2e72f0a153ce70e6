#include "demorgan/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace demorgan::report {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json cell_json(const IndexCell& c) {
  return Json{{"level", c.level},
              {"c", c.c},
              {"class", to_string(c.cls)},
              {"density", c.density},
              {"defect", c.defect},
              {"members", c.members}};
}

}  // namespace

Json tail_json(const TailCertificate& tail) {
  return Json{{"mode", to_string(tail.mode)},
              {"level", tail.level},
              {"liminf_est", tail.liminf_est},
              {"limsup_est", tail.limsup_est},
              {"window", {tail.window_first, tail.window_last}},
              {"window_samples", tail.window_samples},
              {"extrapolated_limit", optional_number(tail.extrapolated_limit)}};
}

Json verdict_json(const Verdict& v, const ReportOptions& options) {
  Json out;
  out["decision"] = to_string(v.decision);
  out["theorem"] = to_string(v.theorem);
  out["level"] = v.level;
  out["horizon"] = v.horizon;
  out["margins"] = Json{{"decision", v.decision_margin}, {"safety", v.safety_margin}};

  Json cert = Json::object();
  if (v.tail) cert["tail"] = tail_json(*v.tail);
  if (v.index) {
    Json idx = cell_json(*v.index);
    // A finite horizon cannot prove N(n) = n + O(1).
    idx["empirical"] = true;
    cert["index_set"] = idx;
  }
  if (!v.grid.empty()) {
    Json grid = Json::array();
    for (const auto& c : v.grid) grid.push_back(cell_json(c));
    cert["grid"] = grid;
  }
  if (v.envelope) {
    cert["envelope"] = Json{{"r", v.envelope->r},
                            {"alpha", v.envelope->alpha},
                            {"holds_everywhere", v.envelope->holds_everywhere}};
  }
  out["certificate"] = cert;

  if (options.escalation) {
    Json path = Json::array();
    for (const auto& step : options.escalation->steps) {
      Json s{{"level", step.level}, {"outcome", to_string(step.outcome)}};
      if (step.summary) s["tail"] = tail_json(*step.summary);
      path.push_back(s);
    }
    out["escalation"] = path;
  }
  out["traces_path"] = options.traces_path ? Json(*options.traces_path) : Json(nullptr);
  out["notes"] = v.notes;
  if (options.generated_at) out["generated_at"] = *options.generated_at;
  return out;
}

Json simulation_json(const SimulationEstimate& sim, bool dispositive) {
  return Json{{"return_prob", sim.return_prob},
              {"ci95", {sim.ci_low, sim.ci_high}},
              {"trials", sim.trials},
              {"step_cap", sim.step_cap},
              {"seed", sim.seed},
              {"returned", sim.returned},
              {"capped", sim.capped},
              {"beyond_horizon", sim.beyond_horizon},
              {"cap_warning", sim.cap_warning},
              {"status", dispositive ? "ADVISORY" : "NON-DISPOSITIVE"}};
}

Json bdp_json(const BdpVerdict& v, const ReportOptions& options) {
  Json out = verdict_json(v.series, options);
  Json b;
  b["decision"] = to_string(v.decision);
  b["simplified_conditions"] = Json{{"ratio_to_one", v.simplified.ratio_to_one},
                                    {"log_bound", v.simplified.log_bound},
                                    {"alpha_used", v.alpha_used},
                                    {"n0", v.simplified.n0},
                                    {"tolerance", v.simplified.tolerance}};
  b["ratio_sufficient"] = v.ratio_sufficient ? verdict_json(*v.ratio_sufficient) : Json(nullptr);
  b["simulation"] = v.simulation ? simulation_json(*v.simulation, v.simulation_dispositive) : Json(nullptr);
  b["notes"] = v.notes;
  out["bdp"] = b;
  return out;
}

std::string trace_csv(const std::vector<SLevelTrace>& traces, std::size_t max_rows_per_level) {
  std::string out = "n,K,s\n";
  char buf[96];
  for (const auto& t : traces) {
    if (t.size() == 0) continue;
    const std::size_t stride = max_rows_per_level == 0 ? 1 : (t.size() + max_rows_per_level - 1) / max_rows_per_level;
    for (std::size_t i = 0; i < t.size(); i += std::max<std::size_t>(stride, 1)) {
      std::snprintf(buf, sizeof buf, "%lld,%d,%.17g\n", static_cast<long long>(t.n[i]), t.level.K, t.s[i]);
      out += buf;
    }
    if ((t.size() - 1) % std::max<std::size_t>(stride, 1) != 0) {
      std::snprintf(buf, sizeof buf, "%lld,%d,%.17g\n", static_cast<long long>(t.n.back()), t.level.K, t.s.back());
      out += buf;
    }
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string summarize(const Json& r) {
  std::ostringstream os;
  os << "decision: " << r.value("decision", std::string("?")) << "\n";
  os << "theorem:  " << r.value("theorem", std::string("?")) << "\n";
  os << "level:    " << r.value("level", 0) << "\n";
  os << "horizon:  " << r.value("horizon", std::int64_t{0}) << "\n";
  if (r.contains("certificate")) {
    const auto& c = r["certificate"];
    if (c.contains("tail")) {
      const auto& t = c["tail"];
      os << "tail:     s in [" << t["liminf_est"].dump() << ", " << t["limsup_est"].dump() << "] over n in ["
         << t["window"][0].dump() << ", " << t["window"][1].dump() << "]\n";
    }
    if (c.contains("index_set")) {
      const auto& i = c["index_set"];
      os << "index:    K=" << i["level"].dump() << " c=" << i["c"].dump() << " " << i["class"].get<std::string>()
         << " density=" << i["density"].dump() << "\n";
    }
  }
  if (r.contains("bdp")) {
    const auto& b = r["bdp"];
    os << "chain:    " << b.value("decision", std::string("?")) << "\n";
    if (!b["simulation"].is_null()) {
      const auto& s = b["simulation"];
      os << "simulated return probability: " << s["return_prob"].dump() << " (95% CI " << s["ci95"][0].dump()
         << " - " << s["ci95"][1].dump() << ", " << s["status"].get<std::string>() << ")\n";
    }
  }
  if (r.contains("notes")) {
    for (const auto& n : r["notes"]) os << "note:     " << n.get<std::string>() << "\n";
  }
  return os.str();
}

}  // namespace demorgan::report
