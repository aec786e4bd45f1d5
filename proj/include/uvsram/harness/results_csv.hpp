#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "uvsram/harness/experiment.hpp"

namespace uvsram {

inline constexpr std::string_view kResultsHeader =
    "benchmark,method,sram_id,voltage_mv,fault_count,outcome,metric,quality";

/// Nine significant digits, locale independent.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

class ResultsParseError : public std::runtime_error {
 public:
  ResultsParseError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Canonical record order: (benchmark, method, sram_id, voltage_mv).
inline void canonicalize(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tuple(to_string(a.benchmark), to_string(a.method), std::string_view(a.sram_id),
                      a.voltage_mv) < std::tuple(to_string(b.benchmark), to_string(b.method),
                                                 std::string_view(b.sram_id), b.voltage_mv);
  });
}

/// The metric column names the benchmark's quality metric on every row; the
/// quality column is empty unless the outcome is SDC.
inline std::string write_results_csv(std::vector<ExperimentRecord> records) {
  canonicalize(records);
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += to_string(r.benchmark);
    out += ',';
    out += to_string(r.method);
    out += ',';
    out += r.sram_id;
    out += ',' + std::to_string(r.voltage_mv) + ',' + std::to_string(r.fault_count) + ',';
    out += to_string(r.outcome);
    out += ',';
    out += to_string(metric_for(r.benchmark));
    out += ',';
    if (r.outcome == Outcome::SDC && r.quality) out += format_g9(r.quality->value);
    out += '\n';
  }
  return out;
}

inline std::vector<ExperimentRecord> parse_results_csv(std::string_view text) {
  std::vector<ExperimentRecord> records;
  std::size_t pos = 0, row = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++row;
    if (!header_seen) {
      if (line != kResultsHeader) throw ResultsParseError(row, "unexpected header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    std::size_t s = 0;
    while (true) {
      auto c = line.find(',', s);
      cols.push_back(line.substr(s, c == std::string_view::npos ? line.size() - s : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (cols.size() != 8) throw ResultsParseError(row, "expected 8 columns");

    ExperimentRecord r;
    auto b = benchmark_from_string(cols[0]);
    auto m = method_from_string(cols[1]);
    auto o = outcome_from_string(cols[5]);
    auto q = metric_from_string(cols[6]);
    if (!b) throw ResultsParseError(row, "unknown benchmark");
    if (!m) throw ResultsParseError(row, "unknown method");
    if (!o) throw ResultsParseError(row, "unknown outcome");
    if (!q || *q != metric_for(*b)) throw ResultsParseError(row, "bad metric");
    if (cols[2].empty()) throw ResultsParseError(row, "empty sram_id");
    r.benchmark = *b;
    r.method = *m;
    r.outcome = *o;
    r.sram_id = std::string(cols[2]);
    auto parse_int = [&](std::string_view sv, auto& out, const char* what) {
      auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
      if (sv.empty() || ec != std::errc{} || p != sv.data() + sv.size())
        throw ResultsParseError(row, std::string("bad ") + what);
    };
    parse_int(cols[3], r.voltage_mv, "voltage_mv");
    parse_int(cols[4], r.fault_count, "fault_count");
    if (r.outcome == Outcome::SDC) {
      if (cols[7].empty()) throw ResultsParseError(row, "SDC row without quality");
      std::string tmp(cols[7]);
      char* end = nullptr;
      const double v = std::strtod(tmp.c_str(), &end);
      if (end != tmp.c_str() + tmp.size()) throw ResultsParseError(row, "bad quality");
      r.quality = QualityValue{*q, v};
    } else if (!cols[7].empty()) {
      throw ResultsParseError(row, "quality present on non-SDC row");
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ResultsParseError(1, "missing header");
  return records;
}

}  // namespace uvsram
