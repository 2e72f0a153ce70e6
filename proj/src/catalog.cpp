#include "demorgan/catalog.hpp"

#include <cmath>
#include <string>

#include "demorgan/errors.hpp"

namespace demorgan {

std::int64_t catalog_start(const std::string& family) {
  if (family == "harmonic" || family == "power" || family == "geometric") return 1;
  if (family == "one_over_n_logsq" || family == "log_power") return 2;
  if (family == "loglog_power") return 3;
  throw ConfigError("unknown family '" + family + "'");
}

Truth catalog_truth(const std::string& family, double param) {
  if (family == "harmonic") return Truth::Diverges;
  if (family == "one_over_n_logsq") return Truth::Converges;
  if (family == "geometric") return Truth::Converges;
  catalog_start(family);
  return param > 1.0 ? Truth::Converges : Truth::Diverges;
}

TermStream catalog_stream(const std::string& family, double param, std::int64_t horizon) {
  const std::int64_t start = catalog_start(family);
  if (horizon < start) throw ConfigError("horizon " + std::to_string(horizon) + " is below the family start");
  if (family == "geometric" && !(param > 1.0)) throw ConfigError("geometric needs q > 1");
  if ((family == "power" || family == "log_power" || family == "loglog_power") && !(param > 0.0)) {
    throw ConfigError(family + " needs p > 0");
  }

  std::vector<double> log_a;
  log_a.reserve(static_cast<std::size_t>(horizon - start + 1));
  const double log_q = family == "geometric" ? std::log(param) : 0.0;
  for (std::int64_t n = start; n <= horizon; ++n) {
    const double x = static_cast<double>(n);
    const double l1 = std::log(x);
    double v;
    if (family == "harmonic") {
      v = -l1;
    } else if (family == "power") {
      v = -param * l1;
    } else if (family == "one_over_n_logsq") {
      v = -l1 - 2.0 * std::log(l1);
    } else if (family == "log_power") {
      v = -l1 - param * std::log(l1);
    } else if (family == "loglog_power") {
      const double l2 = std::log(l1);
      v = -l1 - l2 - param * std::log(l2);
    } else {
      v = -x * log_q;
    }
    log_a.push_back(v);
  }
  return TermStream(start, std::move(log_a));
}

std::vector<CatalogEntry> analytic_catalog() {
  std::vector<CatalogEntry> out;
  for (const char* family : {"power", "log_power", "loglog_power"}) {
    for (const double p : {0.5, 1.0, 2.0}) {
      CatalogEntry e;
      e.family = family;
      e.param = p;
      e.name = std::string(family) + "(p=" + (p == 0.5 ? "0.5" : p == 1.0 ? "1" : "2") + ")";
      e.truth = catalog_truth(family, p);
      e.boundary = p == 1.0;
      out.push_back(e);
    }
  }
  for (const double q : {2.0, 1.1}) {
    CatalogEntry e;
    e.family = "geometric";
    e.param = q;
    e.name = std::string("geometric(q=") + (q == 2.0 ? "2" : "1.1") + ")";
    e.truth = Truth::Converges;
    out.push_back(e);
  }
  return out;
}

}  // namespace demorgan
