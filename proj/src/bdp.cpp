#include "demorgan/bdp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "demorgan/errors.hpp"
#include "demorgan/numeric.hpp"
#include "demorgan/threads.hpp"

namespace demorgan {

const char* to_string(BdpDecision d) {
  switch (d) {
    case BdpDecision::Recurrent:
      return "RECURRENT";
    case BdpDecision::Transient:
      return "TRANSIENT";
    case BdpDecision::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

void BdpRates::validate() const {
  if (lambda.size() != mu.size()) {
    throw RateError("lambda and mu have different lengths (" + std::to_string(lambda.size()) + " vs " +
                    std::to_string(mu.size()) + ")");
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto row = static_cast<std::int64_t>(i + 1);
    if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i])) {
      throw RateError("lambda must be finite and positive, got " + std::to_string(lambda[i]), row);
    }
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) {
      throw RateError("mu must be finite and positive, got " + std::to_string(mu[i]), row);
    }
  }
}

TermStream bdp_series(const BdpRates& rates) {
  rates.validate();
  if (rates.horizon() < 10) throw RateError("need at least 10 states, got " + std::to_string(rates.horizon()));
  std::vector<double> hi, lo;
  hi.reserve(rates.lambda.size());
  lo.reserve(rates.lambda.size());
  numeric::DoubleDouble acc;
  bool monotone = true;
  for (std::size_t i = 0; i < rates.lambda.size(); ++i) {
    // ln(mu/lambda) as log1p of the relative gap keeps near-one ratios exact.
    acc += std::log1p((rates.mu[i] - rates.lambda[i]) / rates.lambda[i]);
    hi.push_back(acc.hi);
    lo.push_back(acc.lo);
    monotone = monotone && rates.mu[i] <= rates.lambda[i];
  }
  return TermStream(1, std::move(hi), std::move(lo), monotone);
}

SimplifiedConditions check_simplified_conditions(const BdpRates& rates, double alpha, double tolerance) {
  rates.validate();
  SimplifiedConditions out;
  out.alpha = alpha;
  out.tolerance = tolerance;
  const std::int64_t H = rates.horizon();
  if (H == 0) return out;

  const std::int64_t tail_first = std::max<std::int64_t>(1, H - H / 4);
  out.ratio_to_one = true;
  for (std::int64_t n = tail_first; n <= H; ++n) {
    const double r = rates.mu[n - 1] / rates.lambda[n - 1];
    if (std::fabs(r - 1.0) > tolerance) {
      out.ratio_to_one = false;
      break;
    }
  }

  std::int64_t last_violation = 0;
  for (std::int64_t n = 1; n <= H; ++n) {
    const double x = static_cast<double>(n);
    const double lhs = std::log1p((rates.mu[n - 1] - rates.lambda[n - 1]) / rates.lambda[n - 1]);
    if (!(lhs < -alpha * std::log(x) / x)) last_violation = n;
  }
  out.n0 = last_violation + 1;
  out.log_bound = alpha > 0.0 && out.n0 < tail_first;
  return out;
}

BdpVerdict classify_bdp(const BdpRates& rates, const ClassifierConfig& config) {
  BdpVerdict out;
  const TermStream series = bdp_series(rates);
  out.series = classify_necsuf(series, config);
  switch (out.series.decision) {
    case Decision::Converges:
      out.decision = BdpDecision::Transient;
      break;
    case Decision::Diverges:
      out.decision = BdpDecision::Recurrent;
      break;
    case Decision::Inconclusive:
      out.decision = BdpDecision::Inconclusive;
      break;
  }

  if (series.monotone_nonincreasing()) {
    // a_n / a_{n+1} = lambda_{n+1} / mu_{n+1}, straight from the rates.
    std::vector<double> m1;
    m1.reserve(rates.lambda.size() - 1);
    for (std::size_t i = 1; i < rates.lambda.size(); ++i) {
      m1.push_back((rates.lambda[i] - rates.mu[i]) / rates.mu[i]);
    }
    try {
      out.ratio_sufficient = classify_ratio_sufficient(1, m1, config);
    } catch (const InsufficientDataError& e) {
      out.notes.emplace_back(std::string("ratio sufficiency skipped: ") + e.what());
    }
  } else {
    out.notes.emplace_back("ratio sufficiency skipped: mu_n > lambda_n for some n");
  }

  const auto grid = default_alpha_grid();
  out.simplified = check_simplified_conditions(rates, grid.front());
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    const SimplifiedConditions c = check_simplified_conditions(rates, *it);
    if (c.log_bound) {
      out.simplified = c;
      out.alpha_used = *it;
      break;
    }
  }
  out.simulation_dispositive = !out.simplified.ratio_to_one;
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void wilson_interval(std::int64_t successes, std::int64_t trials, double& low, double& high) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  // The bounds are exactly 0 and 1 at the extremes; keep rounding from moving them.
  low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  high = successes == trials ? 1.0 : std::min(1.0, centre + half);
}

}  // namespace

SimulationEstimate simulate_bdp(const BdpRates& rates, std::int64_t trials, std::int64_t step_cap,
                                std::uint64_t seed) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (step_cap < 1) throw ConfigError("step_cap must be >= 1");
  rates.validate();
  if (rates.horizon() < 1) throw RateError("no rates supplied");

  const std::int64_t H = rates.horizon();
  // A step goes up when u = (x >> 11) * 2^-53 < p, i.e. when (x >> 11) < ceil(p * 2^53).
  constexpr double kTwoPow53 = 9007199254740992.0;
  std::vector<std::uint64_t> up(static_cast<std::size_t>(H));
  for (std::int64_t k = 0; k < H; ++k) {
    const double p = rates.lambda[k] / (rates.lambda[k] + rates.mu[k]);
    up[k] = static_cast<std::uint64_t>(std::ceil(p * kTwoPow53));
  }

  struct Tally {
    std::int64_t returned = 0, capped = 0, beyond = 0;
  };
  const unsigned workers = worker_threads();
  std::vector<Tally> tallies(workers);
  const auto T = static_cast<std::size_t>(trials);
  const std::size_t chunk = (T + workers - 1) / workers;

  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      Tally& tally = tallies[w];
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(T, first + chunk);
      for (std::size_t t = first; t < last; ++t) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(t)));
        std::int64_t state = 1;
        std::int64_t highest = 1;
        std::int64_t steps = 0;
        while (state > 0 && steps < step_cap) {
          const std::uint64_t threshold = up[std::min(state, H) - 1];
          state += (rng() >> 11) < threshold ? 1 : -1;
          highest = std::max(highest, state);
          ++steps;
        }
        if (state == 0) {
          ++tally.returned;
        } else {
          ++tally.capped;
        }
        if (highest > H) ++tally.beyond;
      }
    }
  });

  SimulationEstimate est;
  est.trials = trials;
  est.step_cap = step_cap;
  est.seed = seed;
  for (const auto& t : tallies) {
    est.returned += t.returned;
    est.capped += t.capped;
    est.beyond_horizon += t.beyond;
  }
  est.return_prob = static_cast<double>(est.returned) / static_cast<double>(trials);
  wilson_interval(est.returned, trials, est.ci_low, est.ci_high);
  est.cap_warning = est.capped * 100 > trials;
  return est;
}

BdpRates bdp_family(const std::string& name, std::int64_t horizon, double lambda, double mu) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  BdpRates r;
  r.lambda.resize(static_cast<std::size_t>(horizon));
  r.mu.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double x = static_cast<double>(n);
    double l = 1.0, m = 1.0;
    if (name == "constant") {
      l = lambda;
      m = mu;
    } else if (name == "equal") {
    } else if (name == "telescoping") {
      l = x + 2.0;
      m = x;
    } else if (name == "log_boundary") {
      if (n >= 3) m = 1.0 + 1.0 / (x * std::log(x));
    } else if (name == "log_drift") {
      m = 1.0 - 2.0 * std::log(x) / x;
    } else {
      throw ConfigError("unknown rate family '" + name + "'");
    }
    r.lambda[n - 1] = l;
    r.mu[n - 1] = m;
  }
  r.validate();
  return r;
}

}  // namespace demorgan
