#pragma once

// Campaign configuration: a plain `section.key = value` file, '#' comments.
// Every key has a default; unknown keys are rejected.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "uvsram/cache.hpp"
#include "uvsram/fault_model.hpp"
#include "uvsram/harness/experiment.hpp"
#include "uvsram/harness/results_csv.hpp"

namespace uvsram::cli {

/// Malformed or invalid configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignConfig {
  std::uint64_t n_srams = 2060;
  std::uint64_t seed = 1;
  CorpusParams corpus;
  CacheGeometry cache;
  std::vector<Benchmark> benchmarks{kAllBenchmarks.begin(), kAllBenchmarks.end()};
  std::vector<Method> methods{Method::HwFi, Method::RndFi};
  std::uint64_t input_seed = 1;
  std::string out_dir = "out";
  unsigned jobs = 0;  // 0: hardware concurrency

  unsigned effective_jobs() const {
    if (jobs) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  void validate() const {
    if (n_srams < 1) throw ConfigError("corpus.n_srams must be >= 1");
    if (benchmarks.empty()) throw ConfigError("campaign.benchmarks is empty");
    if (methods.empty()) throw ConfigError("campaign.methods is empty");
    if (!cache.valid()) throw ConfigError("invalid cache geometry");
    if (cache.capacity_bits() != corpus.geometry.capacity())
      throw ConfigError("cache capacity (" + std::to_string(cache.capacity_bits()) +
                        " bits) differs from SRAM capacity (" +
                        std::to_string(corpus.geometry.capacity()) + " bits)");
    try {
      corpus.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = trim(s.substr(start, comma - start));
    if (!item.empty()) items.push_back(item);
    start = comma + 1;
  }
  return items;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

inline double parse_double(std::string_view key, std::string_view v) {
  std::string tmp(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(tmp, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (tmp.empty() || used != tmp.size())
    throw ConfigError(std::string(key) + ": expected a number, got '" + tmp + "'");
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting.
inline void apply_setting(CampaignConfig& c, std::string_view key, std::string_view value) {
  using detail::parse_double;
  using detail::parse_int;
  auto& sp = c.corpus.spatial;
  if (key == "corpus.n_srams") {
    c.n_srams = parse_int<std::uint64_t>(key, value);
  } else if (key == "corpus.seed") {
    c.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "corpus.faulty_fraction") {
    c.corpus.faulty_fraction = parse_double(key, value);
  } else if (key == "corpus.voltages") {
    c.corpus.voltages.clear();
    for (auto item : detail::split_list(value)) c.corpus.voltages.push_back(parse_int<int>(key, item));
  } else if (key == "corpus.rows") {
    c.corpus.geometry.rows = parse_int<std::uint32_t>(key, value);
  } else if (key == "corpus.cols") {
    c.corpus.geometry.cols = parse_int<std::uint32_t>(key, value);
  } else if (key == "spatial.mean_run_length") {
    sp.mean_run_length = parse_double(key, value);
  } else if (key == "spatial.gap_probability") {
    sp.gap_probability = parse_double(key, value);
  } else if (key == "spatial.outlier_probability") {
    sp.outlier_probability = parse_double(key, value);
  } else if (key == "spatial.anchor_fraction") {
    sp.anchor_fraction = parse_double(key, value);
  } else if (key == "spatial.anchor_onset_min_mv") {
    sp.anchor_onset_min_mv = parse_int<int>(key, value);
  } else if (key == "spatial.anchor_onset_max_mv") {
    sp.anchor_onset_max_mv = parse_int<int>(key, value);
  } else if (key == "cache.sets") {
    c.cache.num_sets = parse_int<std::uint32_t>(key, value);
  } else if (key == "cache.ways") {
    c.cache.associativity = parse_int<std::uint32_t>(key, value);
  } else if (key == "cache.line_bytes") {
    c.cache.line_bytes = parse_int<std::uint32_t>(key, value);
  } else if (key == "campaign.benchmarks") {
    c.benchmarks.clear();
    for (auto item : detail::split_list(value)) {
      if (item == "all") {
        c.benchmarks.assign(kAllBenchmarks.begin(), kAllBenchmarks.end());
        continue;
      }
      auto b = benchmark_from_string(item);
      if (!b) throw ConfigError("campaign.benchmarks: unknown benchmark '" + std::string(item) + "'");
      c.benchmarks.push_back(*b);
    }
  } else if (key == "campaign.methods") {
    c.methods.clear();
    for (auto item : detail::split_list(value)) {
      if (item == "both") {
        c.methods = {Method::HwFi, Method::RndFi};
        continue;
      }
      auto m = method_from_string(item);
      if (!m) throw ConfigError("campaign.methods: unknown method '" + std::string(item) + "'");
      c.methods.push_back(*m);
    }
  } else if (key == "campaign.input_seed") {
    c.input_seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "output.dir") {
    if (value.empty()) throw ConfigError("output.dir is empty");
    c.out_dir = std::string(value);
  } else if (key == "run.jobs") {
    c.jobs = parse_int<unsigned>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

inline CampaignConfig parse_config(std::string_view text, CampaignConfig base = {}) {
  std::size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key.find('.') == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": key must be section.key");
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline CampaignConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Every setting with its current value, in `section.key = value` form.
inline std::string dump_config(const CampaignConfig& c) {
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& x : items) {
      if (!s.empty()) s += ',';
      s += fmt(x);
    }
    return s;
  };
  const auto& sp = c.corpus.spatial;
  std::ostringstream o;
  o << "corpus.n_srams = " << c.n_srams << '\n'
    << "corpus.seed = " << c.seed << '\n'
    << "corpus.faulty_fraction = " << format_g9(c.corpus.faulty_fraction) << '\n'
    << "corpus.voltages = "
    << join(c.corpus.voltages, [](int v) { return std::to_string(v); }) << '\n'
    << "corpus.rows = " << c.corpus.geometry.rows << '\n'
    << "corpus.cols = " << c.corpus.geometry.cols << '\n'
    << "spatial.mean_run_length = " << format_g9(sp.mean_run_length) << '\n'
    << "spatial.gap_probability = " << format_g9(sp.gap_probability) << '\n'
    << "spatial.outlier_probability = " << format_g9(sp.outlier_probability) << '\n'
    << "spatial.anchor_fraction = " << format_g9(sp.anchor_fraction) << '\n'
    << "spatial.anchor_onset_min_mv = " << sp.anchor_onset_min_mv << '\n'
    << "spatial.anchor_onset_max_mv = " << sp.anchor_onset_max_mv << '\n'
    << "cache.sets = " << c.cache.num_sets << '\n'
    << "cache.ways = " << c.cache.associativity << '\n'
    << "cache.line_bytes = " << c.cache.line_bytes << '\n'
    << "campaign.benchmarks = "
    << join(c.benchmarks, [](Benchmark b) { return std::string(to_string(b)); }) << '\n'
    << "campaign.methods = "
    << join(c.methods, [](Method m) { return std::string(to_string(m)); }) << '\n'
    << "campaign.input_seed = " << c.input_seed << '\n'
    << "output.dir = " << c.out_dir << '\n'
    << "run.jobs = " << c.jobs << '\n';
  return o.str();
}

}  // namespace uvsram::cli
