#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "demorgan/bdp.hpp"
#include "demorgan/series.hpp"

namespace demorgan::io {

/// One JSON object per line: {"n": int, "ln_a": float} or {"n": int, "a": float}.
/// n must increase by exactly one from line to line. Blank lines are skipped.
/// ParseError names the offending line.
TermStream parse_terms_jsonl(std::istream& in);
TermStream read_terms_jsonl(const std::filesystem::path& path);
std::string terms_jsonl(const TermStream& ts);

/// CSV with header n,lambda,mu (any column order); n runs 1, 2, 3, ...
/// ParseError for structural problems, RateError (row = data row) for bad rates.
BdpRates parse_rates_csv(std::istream& in);
BdpRates read_rates_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace demorgan::io
