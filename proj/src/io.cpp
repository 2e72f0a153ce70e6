#include "demorgan/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <unistd.h>

#include "demorgan/errors.hpp"
#include "json.hpp"

namespace demorgan::io {

using nlohmann::json;

TermStream parse_terms_jsonl(std::istream& in) {
  std::vector<double> log_a;
  std::int64_t start = 0;
  std::int64_t expected = 0;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!rec.is_object()) throw ParseError("expected a JSON object", lineno);
    if (!rec.contains("n") || !rec["n"].is_number_integer()) throw ParseError("missing integer field \"n\"", lineno);
    const auto n = rec["n"].get<std::int64_t>();
    if (log_a.empty()) {
      if (n < 1) throw ParseError("n must be >= 1", lineno);
      start = n;
      expected = n;
    }
    if (n != expected) {
      throw ParseError("expected n = " + std::to_string(expected) + ", got " + std::to_string(n), lineno);
    }
    double v;
    if (rec.contains("ln_a")) {
      if (!rec["ln_a"].is_number()) throw ParseError("\"ln_a\" must be a number", lineno);
      v = rec["ln_a"].get<double>();
    } else if (rec.contains("a")) {
      if (!rec["a"].is_number()) throw ParseError("\"a\" must be a number", lineno);
      const double a = rec["a"].get<double>();
      if (!(a > 0.0)) throw ParseError("term must be positive", lineno);
      v = std::log(a);
    } else {
      throw ParseError("record needs \"ln_a\" or \"a\"", lineno);
    }
    if (!std::isfinite(v)) throw ParseError("term is not finite", lineno);
    log_a.push_back(v);
    ++expected;
  }
  if (log_a.empty()) throw ParseError("no records");
  return TermStream(start, std::move(log_a));
}

TermStream read_terms_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_terms_jsonl(in);
}

std::string terms_jsonl(const TermStream& ts) {
  std::string out;
  out.reserve(ts.size() * 40);
  const auto hi = ts.log_hi();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    json rec = {{"n", ts.start_index() + static_cast<std::int64_t>(i)}, {"ln_a", hi[i]}};
    out += rec.dump();
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, const char* column, std::int64_t row, std::int64_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ": column " + column + " is not a number: '" + text + "'", lineno);
  }
}

}  // namespace

BdpRates parse_rates_csv(std::istream& in) {
  std::string line;
  std::int64_t lineno = 0;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto header = split_csv(line);
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    break;
  }
  for (const char* name : {"n", "lambda", "mu"}) {
    if (!col.count(name)) throw ParseError(std::string("header is missing column '") + name + "'", lineno);
  }

  BdpRates rates;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const auto cells = split_csv(line);
    if (cells.size() < col.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(col.size()) + " columns", lineno);
    }
    const double n = parse_number(cells[col["n"]], "n", row, lineno);
    if (n != static_cast<double>(row)) {
      throw ParseError("row " + std::to_string(row) + ": expected n = " + std::to_string(row), lineno);
    }
    const double l = parse_number(cells[col["lambda"]], "lambda", row, lineno);
    const double m = parse_number(cells[col["mu"]], "mu", row, lineno);
    if (!(l > 0.0) || !std::isfinite(l)) throw RateError("lambda must be finite and positive", row);
    if (!(m > 0.0) || !std::isfinite(m)) throw RateError("mu must be finite and positive", row);
    rates.lambda.push_back(l);
    rates.mu.push_back(m);
  }
  if (rates.lambda.empty()) throw ParseError("no data rows", lineno);
  return rates;
}

BdpRates read_rates_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_rates_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace demorgan::io
