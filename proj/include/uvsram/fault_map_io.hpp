#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uvsram/fault_map.hpp"

namespace uvsram {

// Text format, one record per LF-terminated line:
//
//   # sram-fault-map v1
//   sram_id=<token>
//   voltage_mv=<int>
//   rows=<int>
//   cols=<int>
//   fault <row> <col> <stuck0|stuck1|flip> <timing> [onset_mv=<int>]
//
// where <timing> is `permanent`, `transient:<tick>` or
// `intermittent:<start>:<duration>`. Fault lines are written in ascending
// linear-index order.

inline constexpr std::string_view kFaultMapMagic = "# sram-fault-map v1";

class FaultMapParseError : public std::runtime_error {
 public:
  FaultMapParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view kind_token(CorruptionKind k) {
  switch (k) {
    case CorruptionKind::StuckAt0: return "stuck0";
    case CorruptionKind::StuckAt1: return "stuck1";
    case CorruptionKind::BitFlip: return "flip";
  }
  return "stuck0";
}

inline std::string timing_token(const FaultTiming& t) {
  if (const auto* tr = std::get_if<Transient>(&t))
    return "transient:" + std::to_string(tr->fire_tick);
  if (const auto* im = std::get_if<Intermittent>(&t))
    return "intermittent:" + std::to_string(im->start_tick) + ":" +
           std::to_string(im->duration);
  return "permanent";
}

inline bool parse_timing(std::string_view tok, FaultTiming& out) {
  if (tok == "permanent") {
    out = Permanent{};
    return true;
  }
  constexpr std::string_view kTr = "transient:";
  constexpr std::string_view kIm = "intermittent:";
  if (tok.starts_with(kTr)) {
    Transient t;
    if (!parse_int(tok.substr(kTr.size()), t.fire_tick)) return false;
    out = t;
    return true;
  }
  if (tok.starts_with(kIm)) {
    auto rest = tok.substr(kIm.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) return false;
    Intermittent t;
    if (!parse_int(rest.substr(0, colon), t.start_tick) ||
        !parse_int(rest.substr(colon + 1), t.duration))
      return false;
    out = t;
    return true;
  }
  return false;
}

}  // namespace detail

inline std::string serialize_fault_map(const FaultMap& map) {
  FaultMap sorted = map;
  sorted.sort();
  std::string out;
  out.reserve(96 + 40 * sorted.faults.size());
  out += kFaultMapMagic;
  out += "\nsram_id=" + sorted.sram_id;
  out += "\nvoltage_mv=" + std::to_string(sorted.voltage_mv);
  out += "\nrows=" + std::to_string(sorted.geometry.rows);
  out += "\ncols=" + std::to_string(sorted.geometry.cols);
  out += '\n';
  for (const auto& f : sorted.faults) {
    out += "fault ";
    out += std::to_string(f.location.row);
    out += ' ';
    out += std::to_string(f.location.col);
    out += ' ';
    out += detail::kind_token(f.kind);
    out += ' ';
    out += detail::timing_token(f.timing);
    if (f.onset_voltage_mv) {
      out += " onset_mv=";
      out += std::to_string(*f.onset_voltage_mv);
    }
    out += '\n';
  }
  return out;
}

inline FaultMap parse_fault_map(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }

  if (lines.empty() || lines[0] != kFaultMapMagic)
    throw FaultMapParseError(1, "expected '# sram-fault-map v1' header");

  FaultMap map;
  const char* keys[] = {"sram_id", "voltage_mv", "rows", "cols"};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t lineno = k + 2;
    if (lines.size() <= k + 1)
      throw FaultMapParseError(lineno, std::string("missing '") + keys[k] + "='");
    auto line = lines[k + 1];
    auto eq = line.find('=');
    if (eq == std::string_view::npos || line.substr(0, eq) != keys[k])
      throw FaultMapParseError(lineno, std::string("expected '") + keys[k] + "='");
    auto value = line.substr(eq + 1);
    bool ok = true;
    switch (k) {
      case 0:
        ok = !value.empty() && value.find(' ') == std::string_view::npos;
        map.sram_id = std::string(value);
        break;
      case 1: ok = detail::parse_int(value, map.voltage_mv); break;
      case 2: ok = detail::parse_int(value, map.geometry.rows) && map.geometry.rows > 0; break;
      case 3: ok = detail::parse_int(value, map.geometry.cols) && map.geometry.cols > 0; break;
    }
    if (!ok)
      throw FaultMapParseError(lineno, std::string("bad value for ") + keys[k]);
  }

  std::vector<std::pair<std::uint64_t, std::size_t>> seen;  // linear, line
  for (std::size_t i = 5; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (lines[i].empty()) continue;
    auto tok = detail::split_ws(lines[i]);
    if (tok.size() < 5 || tok.size() > 6 || tok[0] != "fault")
      throw FaultMapParseError(lineno, "malformed fault line");
    FaultSpec f;
    if (!detail::parse_int(tok[1], f.location.row) ||
        !detail::parse_int(tok[2], f.location.col))
      throw FaultMapParseError(lineno, "bad fault coordinates");
    if (!f.location.inside(map.geometry))
      throw FaultMapParseError(lineno, "fault location out of range");
    if (tok[3] == "stuck0") f.kind = CorruptionKind::StuckAt0;
    else if (tok[3] == "stuck1") f.kind = CorruptionKind::StuckAt1;
    else if (tok[3] == "flip") f.kind = CorruptionKind::BitFlip;
    else throw FaultMapParseError(lineno, "unknown corruption kind");
    if (!detail::parse_timing(tok[4], f.timing))
      throw FaultMapParseError(lineno, "bad timing");
    if (tok.size() == 6) {
      constexpr std::string_view kOnset = "onset_mv=";
      int onset = 0;
      if (!tok[5].starts_with(kOnset) ||
          !detail::parse_int(tok[5].substr(kOnset.size()), onset))
        throw FaultMapParseError(lineno, "bad onset field");
      if (onset < kMinVoltageMv || onset > kMaxVoltageMv)
        throw FaultMapParseError(lineno, "onset voltage out of range");
      f.onset_voltage_mv = onset;
    }
    seen.emplace_back(f.location.linear(map.geometry), lineno);
    map.faults.push_back(f);
  }

  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i].first == seen[i - 1].first)
      throw FaultMapParseError(std::max(seen[i].second, seen[i - 1].second),
                               "duplicate fault location");
  map.sort();
  return map;
}

inline FaultMap read_fault_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fault_map(ss.str());
}

inline void write_fault_map_file(const std::string& path, const FaultMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_fault_map(map);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace uvsram
