#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "uvsram/rng.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

inline constexpr std::uint32_t kPointsPerBlock = 16;
/// Centroid record: cx, cy, sum_x, sum_y, count (u64), padded to 64 bytes.
inline constexpr std::uint64_t kCentroidStride = 64;

/// 2D points drawn around k well-separated Gaussian-ish blobs.
inline std::vector<double> make_kmeans_input(const WorkloadConfig& cfg) {
  const std::uint32_t n = cfg.size.kmeans_points;
  const std::uint32_t k = cfg.size.kmeans_k;
  Rng rng = Rng::stream(cfg.input_seed, 0x6b6d65616e73ULL);
  std::vector<double> centers(2ull * k);
  for (auto& c : centers) c = 10.0 * rng.uniform();
  std::vector<double> pts(2ull * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint64_t c = rng.below(k);
    // Sum of three uniforms: cheap bell-shaped noise.
    for (int d = 0; d < 2; ++d) {
      const double noise = rng.uniform() + rng.uniform() + rng.uniform() - 1.5;
      pts[2ull * i + d] = centers[2 * c + d] + 1.2 * noise;
    }
  }
  return pts;
}

/// Lloyd's algorithm; centroid c starts at point c * (n / k). Output is the
/// assignment vector followed by the final centroids.
///
/// Index regions: the point-block table and the centroid table. Labels are
/// used to index the centroid table, so a label >= k faults.
inline WorkloadResult run_kmeans(const WorkloadConfig& cfg, SimMemory& mem) {
  const auto pts = make_kmeans_input(cfg);
  const std::uint32_t n = cfg.size.kmeans_points;
  const std::uint32_t k = cfg.size.kmeans_k;
  const std::uint32_t blocks = (n + kPointsPerBlock - 1) / kPointsPerBlock;

  const auto btab = mem.add_region("kmeans.blocks", RegionKind::Index, 8ull * blocks);
  const auto ctab = mem.add_region("kmeans.centroid_ptr", RegionKind::Index, 8ull * k);
  const auto data = mem.add_region("kmeans.points", RegionKind::Bulk, 16ull * n, 1024);
  const auto cent = mem.add_region("kmeans.centroids", RegionKind::Bulk, kCentroidStride * k, 1024);
  const auto asg = mem.add_region("kmeans.assign", RegionKind::Bulk, 4ull * n, 1024);
  const auto fin = mem.add_region("kmeans.final", RegionKind::Bulk, 16ull * k, 64);

  std::vector<std::uint64_t> bptr(blocks), cptr(k);
  for (std::uint32_t b = 0; b < blocks; ++b)
    bptr[b] = mem.region(data).base + 16ull * kPointsPerBlock * b;
  for (std::uint32_t c = 0; c < k; ++c) cptr[c] = mem.region(cent).base + kCentroidStride * c;
  mem.preload(btab, detail::as_bytes_of(bptr));
  mem.preload(ctab, detail::as_bytes_of(cptr));
  mem.preload(data, detail::as_bytes_of(pts));
  mem.preload(asg, detail::as_bytes_of(std::vector<std::int32_t>(n, -1)));

  auto point_addr = [&](std::uint32_t i) {
    return mem.load<std::uint64_t>(btab, mem.element<std::uint64_t>(btab, i / kPointsPerBlock)) +
           16ull * (i % kPointsPerBlock);
  };
  auto centroid = [&](std::int64_t label) {
    return mem.load<std::uint64_t>(ctab, mem.region(ctab).base + 8 * std::uint64_t(label));
  };

  auto kernel = [&] {
    for (std::uint32_t c = 0; c < k; ++c) {
      const auto p = point_addr(c * (n / k));
      const auto cp = centroid(c);
      mem.store(cent, cp, mem.load<double>(data, p));
      mem.store(cent, cp + 8, mem.load<double>(data, p + 8));
    }
    for (std::uint32_t it = 0; it < cfg.size.kmeans_max_iter; ++it) {
      std::uint32_t changed = 0;
      for (std::uint32_t i = 0; i < n; ++i) {
        const auto p = point_addr(i);
        const double x = mem.load<double>(data, p);
        const double y = mem.load<double>(data, p + 8);
        std::int32_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::uint32_t c = 0; c < k; ++c) {
          const auto cp = centroid(c);
          const double dx = x - mem.load<double>(cent, cp);
          const double dy = y - mem.load<double>(cent, cp + 8);
          const double d = dx * dx + dy * dy;
          if (d < best_d) {
            best_d = d;
            best = static_cast<std::int32_t>(c);
          }
        }
        const auto slot = mem.element<std::int32_t>(asg, i);
        if (mem.load<std::int32_t>(asg, slot) != best) ++changed;
        mem.store(asg, slot, best);
      }
      if (changed == 0) break;

      for (std::uint32_t c = 0; c < k; ++c) {
        const auto cp = centroid(c);
        mem.store(cent, cp + 16, 0.0);
        mem.store(cent, cp + 24, 0.0);
        mem.store(cent, cp + 32, std::uint64_t{0});
      }
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::int32_t label = mem.load<std::int32_t>(asg, mem.element<std::int32_t>(asg, i));
        const auto cp = centroid(label);
        const auto p = point_addr(i);
        mem.store(cent, cp + 16, mem.load<double>(cent, cp + 16) + mem.load<double>(data, p));
        mem.store(cent, cp + 24, mem.load<double>(cent, cp + 24) + mem.load<double>(data, p + 8));
        mem.store(cent, cp + 32, mem.load<std::uint64_t>(cent, cp + 32) + 1);
      }
      for (std::uint32_t c = 0; c < k; ++c) {
        const auto cp = centroid(c);
        const auto cnt = mem.load<std::uint64_t>(cent, cp + 32);
        if (cnt == 0) continue;
        mem.store(cent, cp, mem.load<double>(cent, cp + 16) / double(cnt));
        mem.store(cent, cp + 8, mem.load<double>(cent, cp + 24) / double(cnt));
      }
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      const auto cp = centroid(c);
      mem.store(fin, mem.element<double>(fin, 2 * c), mem.load<double>(cent, cp));
      mem.store(fin, mem.element<double>(fin, 2 * c + 1), mem.load<double>(cent, cp + 8));
    }
  };
  const RegionId outs[] = {asg, fin};
  return detail::guarded_run(mem, kernel, outs,
                             {{"assignments", ElementType::I32, {n}},
                              {"centroids", ElementType::F64, {k, 2}}});
}

}  // namespace uvsram
