#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "uvsram/harness/experiment.hpp"

namespace uvsram {

/// Largest fault count shown in the outcome-vs-count series.
inline constexpr std::uint64_t kFaultCountCutoff = 16;

struct OutcomeCounts {
  std::uint64_t correct = 0;
  std::uint64_t sdc = 0;
  std::uint64_t crash = 0;

  std::uint64_t total() const noexcept { return correct + sdc + crash; }
  void add(Outcome o) {
    switch (o) {
      case Outcome::Correct: ++correct; break;
      case Outcome::SDC: ++sdc; break;
      case Outcome::Crash: ++crash; break;
    }
  }
  double fraction(Outcome o) const {
    const auto t = total();
    if (t == 0) return 0.0;
    switch (o) {
      case Outcome::Correct: return double(correct) / double(t);
      case Outcome::SDC: return double(sdc) / double(t);
      case Outcome::Crash: return double(crash) / double(t);
    }
    return 0.0;
  }
};

/// Benchmark name, or "all" for the pooled series.
using BenchmarkKey = std::string;

struct AggregateReport {
  /// Outcome mix per (benchmark, method).
  std::map<std::pair<BenchmarkKey, Method>, OutcomeCounts> classification;
  /// Outcome mix per (benchmark or "all", method, fault count <= 16).
  std::map<std::tuple<BenchmarkKey, Method, std::uint64_t>, OutcomeCounts> by_fault_count;
  /// Raw SDC quality values per (benchmark, method), in record order.
  std::map<std::pair<BenchmarkKey, Method>, std::vector<double>> quality;
};

inline AggregateReport aggregate(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  AggregateReport rep;
  for (const auto& r : records) {
    const BenchmarkKey b(to_string(r.benchmark));
    rep.classification[{b, r.method}].add(r.outcome);
    if (r.fault_count <= kFaultCountCutoff) {
      rep.by_fault_count[{b, r.method, r.fault_count}].add(r.outcome);
      rep.by_fault_count[{"all", r.method, r.fault_count}].add(r.outcome);
    }
    if (r.outcome == Outcome::SDC && r.quality)
      rep.quality[{b, r.method}].push_back(r.quality->value);
  }
  return rep;
}

}  // namespace uvsram
