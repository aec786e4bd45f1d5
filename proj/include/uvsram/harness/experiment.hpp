#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uvsram/fault_map.hpp"
#include "uvsram/harness/metrics.hpp"
#include "uvsram/workloads/registry.hpp"

namespace uvsram {

enum class Outcome { Correct, SDC, Crash };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Correct: return "Correct";
    case Outcome::SDC: return "SDC";
    case Outcome::Crash: return "Crash";
  }
  return "?";
}

inline std::optional<Outcome> outcome_from_string(std::string_view s) {
  for (auto o : {Outcome::Correct, Outcome::SDC, Outcome::Crash})
    if (to_string(o) == s) return o;
  return std::nullopt;
}

enum class Method { HwFi, RndFi };

inline std::string_view to_string(Method m) { return m == Method::HwFi ? "HW_FI" : "RND_FI"; }

inline std::optional<Method> method_from_string(std::string_view s) {
  if (s == "HW_FI") return Method::HwFi;
  if (s == "RND_FI") return Method::RndFi;
  return std::nullopt;
}

enum class QualityMetric { PsnrDb, AvgRelativeError, ClusterAccuracyPercent };

inline std::string_view to_string(QualityMetric m) {
  switch (m) {
    case QualityMetric::PsnrDb: return "PSNR_dB";
    case QualityMetric::AvgRelativeError: return "AvgRelativeError";
    case QualityMetric::ClusterAccuracyPercent: return "ClusterAccuracyPercent";
  }
  return "?";
}

inline std::optional<QualityMetric> metric_from_string(std::string_view s) {
  for (auto m : {QualityMetric::PsnrDb, QualityMetric::AvgRelativeError,
                 QualityMetric::ClusterAccuracyPercent})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

inline QualityMetric metric_for(Benchmark b) {
  switch (b) {
    case Benchmark::Dct:
    case Benchmark::Sobel: return QualityMetric::PsnrDb;
    case Benchmark::KMeans: return QualityMetric::ClusterAccuracyPercent;
    default: return QualityMetric::AvgRelativeError;
  }
}

/// Higher is better for PSNR and cluster accuracy, lower for relative error.
inline bool higher_is_better(QualityMetric m) { return m != QualityMetric::AvgRelativeError; }

struct QualityValue {
  QualityMetric metric;
  double value;
  friend bool operator==(const QualityValue&, const QualityValue&) = default;
};

struct ExperimentRecord {
  Benchmark benchmark = Benchmark::Jacobi;
  Method method = Method::HwFi;
  std::string sram_id;
  int voltage_mv = kMinVoltageMv;
  std::uint64_t fault_count = 0;
  Outcome outcome = Outcome::Correct;
  std::optional<QualityValue> quality;  // present iff outcome == SDC

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Crash if the run crashed, Correct iff the output bytes equal the golden
/// bytes, SDC otherwise (a shape mismatch is an SDC too).
inline Outcome classify(const WorkloadResult& result, const Output& golden) {
  if (result.crashed()) return Outcome::Crash;
  const auto& out = result.output();
  if (out.fields == golden.fields && out.bytes == golden.bytes) return Outcome::Correct;
  return Outcome::SDC;
}

/// Quality of an SDC output relative to golden.
inline QualityValue quality_of(Benchmark b, const Output& golden, const Output& faulty) {
  const QualityMetric m = metric_for(b);
  if (!(golden.fields == faulty.fields))
    throw std::invalid_argument("quality_of: output shapes differ");
  switch (m) {
    case QualityMetric::PsnrDb:
      return {m, psnr(golden.field_bytes(0), faulty.field_bytes(0))};
    case QualityMetric::ClusterAccuracyPercent: {
      const auto g = golden.field_values<std::int32_t>(0);
      const auto f = faulty.field_values<std::int32_t>(0);
      return {m, cluster_accuracy(g, f)};
    }
    case QualityMetric::AvgRelativeError: {
      const auto g = golden.field_values<double>(0);
      const auto f = faulty.field_values<double>(0);
      return {m, avg_relative_error(g, f)};
    }
  }
  throw std::logic_error("unreachable");
}

/// Fault-free reference output. A crash here is a configuration bug.
inline Output golden_run(const WorkloadConfig& cfg, const CacheGeometry& geometry) {
  auto result = run_workload(cfg, geometry);
  if (result.crashed())
    throw std::logic_error("golden run of " + std::string(to_string(cfg.benchmark)) +
                           " crashed: " + result.crash().detail);
  return result.output();
}

/// One faulty simulation: install `map`, run, classify, score SDCs.
inline ExperimentRecord run_experiment(const WorkloadConfig& cfg, const CacheGeometry& geometry,
                                       const Output& golden, const FaultMap& map, Method method) {
  const auto result = run_workload(cfg, geometry, &map);
  ExperimentRecord rec{cfg.benchmark, method,          map.sram_id, map.voltage_mv,
                       map.faults.size(), classify(result, golden), std::nullopt};
  if (rec.outcome == Outcome::SDC) {
    const auto& out = result.output();
    if (out.fields == golden.fields) {
      rec.quality = quality_of(cfg.benchmark, golden, out);
    } else {
      // Shape mismatch cannot be scored; report the worst value.
      const auto m = metric_for(cfg.benchmark);
      rec.quality = QualityValue{m, m == QualityMetric::AvgRelativeError ? 1.0 : 0.0};
    }
  }
  return rec;
}

}  // namespace uvsram
