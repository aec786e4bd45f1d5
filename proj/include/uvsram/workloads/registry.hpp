#pragma once

#include <cstdint>
#include <stdexcept>

#include "uvsram/workloads/blackscholes.hpp"
#include "uvsram/workloads/dct.hpp"
#include "uvsram/workloads/jacobi.hpp"
#include "uvsram/workloads/kmeans.hpp"
#include "uvsram/workloads/montecarlo.hpp"
#include "uvsram/workloads/sobel.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

/// Loads/stores allowed before a run is declared hung. Covers the longest
/// legitimate path (iteration caps included) with a 2x margin, except Monte
/// Carlo where the per-walk cap is far above typical walk lengths.
inline std::uint64_t default_step_budget(const WorkloadConfig& cfg) {
  const auto& s = cfg.size;
  switch (cfg.benchmark) {
    case Benchmark::Jacobi: {
      const std::uint64_t per_iter = std::uint64_t{s.jacobi_n} * (2ull * s.jacobi_n + 6);
      return 2 * std::uint64_t{s.jacobi_max_iter + 1} * per_iter;
    }
    case Benchmark::Blackscholes:
      return 2 * (8ull * s.options + 64);
    case Benchmark::Dct: {
      const std::uint64_t blocks = std::uint64_t{s.image_side / 8} * (s.image_side / 8);
      return 2 * blocks * 5000;
    }
    case Benchmark::MonteCarlo:
      // About 64 loads/stores per walk on average; allow 16x.
      return 16ull * 64 * s.mc_points * s.mc_walks;
    case Benchmark::Sobel:
      return 2 * 13ull * s.image_side * s.image_side;
    case Benchmark::KMeans:
      return 2 * (std::uint64_t{s.kmeans_max_iter} * 32 * s.kmeans_points + 64ull * s.kmeans_k +
                  s.kmeans_points);
  }
  return UINT64_MAX;
}

inline WorkloadResult run_benchmark(const WorkloadConfig& cfg, SimMemory& mem) {
  switch (cfg.benchmark) {
    case Benchmark::Jacobi: return run_jacobi(cfg, mem);
    case Benchmark::Blackscholes: return run_blackscholes(cfg, mem);
    case Benchmark::Dct: return run_dct(cfg, mem);
    case Benchmark::MonteCarlo: return run_mc(cfg, mem);
    case Benchmark::Sobel: return run_sobel(cfg, mem);
    case Benchmark::KMeans: return run_kmeans(cfg, mem);
  }
  throw std::invalid_argument("unknown benchmark");
}

enum class Routing { Cached, Flat };

/// Fresh sandbox, optional fault map installed on the L1-D, one run.
inline WorkloadResult run_workload(const WorkloadConfig& cfg, const CacheGeometry& geometry,
                                   const FaultMap* faults = nullptr,
                                   Routing routing = Routing::Cached) {
  const std::uint64_t budget = cfg.step_budget ? cfg.step_budget : default_step_budget(cfg);
  SimMemory mem(geometry, budget, routing == Routing::Cached);
  if (faults) mem.install_fault_map(*faults);
  return run_benchmark(cfg, mem);
}

}  // namespace uvsram
