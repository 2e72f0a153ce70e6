#pragma once

// Series whose convergence is settled by the integral test.

#include <cstdint>
#include <string>
#include <vector>

#include "demorgan/synth.hpp"

namespace demorgan {

struct CatalogEntry {
  /// Display name, e.g. "power(p=2)".
  std::string name;
  std::string family;
  double param = 0.0;
  Truth truth = Truth::Unknown;
  /// Exponent sits on the convergence boundary (p = 1).
  bool boundary = false;
};

/// Families and their first index:
///   harmonic          1/n                          n >= 1
///   power             n^-p                         n >= 1
///   one_over_n_logsq  1/(n ln^2 n)                 n >= 2
///   log_power         1/(n ln^p n)                 n >= 2
///   loglog_power      1/(n ln n (ln ln n)^p)       n >= 3
///   geometric         q^-n, q > 1                  n >= 1
/// ConfigError for unknown families or parameters outside their range.
TermStream catalog_stream(const std::string& family, double param, std::int64_t horizon);

std::int64_t catalog_start(const std::string& family);
Truth catalog_truth(const std::string& family, double param);

/// The eleven-family acceptance catalog: power, log_power and loglog_power at
/// p = 0.5, 1, 2, and geometric at q = 2 and q = 1.1.
std::vector<CatalogEntry> analytic_catalog();

}  // namespace demorgan
