#pragma once

// Birth-death chains on {0, 1, 2, ...} with birth rates lambda_n and death
// rates mu_n. The chain is transient iff sum_n prod_{k<=n} mu_k / lambda_k
// converges, so recurrence is decided by classifying that series.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demorgan/classifier.hpp"

namespace demorgan {

struct BdpRates {
  /// lambda[k - 1], mu[k - 1] are the rates of state k, k = 1 .. horizon.
  std::vector<double> lambda;
  std::vector<double> mu;

  std::int64_t horizon() const { return static_cast<std::int64_t>(lambda.size()); }
  /// RateError (row = state) unless both sequences have equal length and
  /// every rate is finite and positive.
  void validate() const;
};

enum class BdpDecision { Recurrent, Transient, Inconclusive };

const char* to_string(BdpDecision d);

struct SimplifiedConditions {
  /// mu_n / lambda_n within 1 +- tolerance over the tail window.
  bool ratio_to_one = false;
  /// ln(mu_n / lambda_n) < -alpha ln n / n for all n >= n0, with n0 inside
  /// the first 75% of the horizon.
  bool log_bound = false;
  double alpha = 0.0;
  std::int64_t n0 = 0;
  double tolerance = 0.05;
};

struct SimulationEstimate {
  double return_prob = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t trials = 0;
  std::int64_t step_cap = 0;
  std::uint64_t seed = 0;
  std::int64_t returned = 0;
  /// Trials still away from 0 after step_cap steps.
  std::int64_t capped = 0;
  /// Trials that climbed above the rate horizon (the last rates are reused there).
  std::int64_t beyond_horizon = 0;
  /// More than 1% of trials hit the cap.
  bool cap_warning = false;
};

struct BdpVerdict {
  BdpDecision decision = BdpDecision::Inconclusive;
  /// classify_necsuf on the product series; decides the chain.
  Verdict series;
  /// classify_ratio_sufficient on lambda_{n+1} / mu_{n+1}; absent unless mu_n <= lambda_n throughout.
  std::optional<Verdict> ratio_sufficient;
  SimplifiedConditions simplified;
  /// Largest grid alpha at which the log bound holds, 0 if none.
  double alpha_used = 0.0;
  std::optional<SimulationEstimate> simulation;
  /// Simulation cannot settle near-boundary chains (mu_n / lambda_n -> 1).
  bool simulation_dispositive = false;
  std::vector<std::string> notes;
};

/// a_n = prod_{k=1}^n mu_k / lambda_k as a log-domain stream starting at n = 1.
/// Flagged nonincreasing iff mu_k <= lambda_k for every k.
TermStream bdp_series(const BdpRates& rates);

SimplifiedConditions check_simplified_conditions(const BdpRates& rates, double alpha, double tolerance = 0.05);

BdpVerdict classify_bdp(const BdpRates& rates, const ClassifierConfig& config = {});

/// Embedded jump chain from state 1, counting returns to 0 within step_cap
/// steps, with a 95% Wilson interval. Each trial draws from its own generator
/// seeded from (seed, trial), so results do not depend on the thread count.
SimulationEstimate simulate_bdp(const BdpRates& rates, std::int64_t trials, std::int64_t step_cap,
                                std::uint64_t seed);

/// Named rate families:
///   constant      lambda_n = lambda, mu_n = mu
///   equal         lambda_n = mu_n = 1
///   telescoping   lambda_n = n + 2, mu_n = n          (mu/lambda = n/(n+2))
///   log_boundary  lambda_n = 1, mu_n = 1 + 1/(n ln n) for n >= 3, 1 below
///   log_drift     lambda_n = 1, mu_n = 1 - 2 ln n / n
/// ConfigError for unknown names.
BdpRates bdp_family(const std::string& name, std::int64_t horizon, double lambda = 1.0, double mu = 2.0);

}  // namespace demorgan
