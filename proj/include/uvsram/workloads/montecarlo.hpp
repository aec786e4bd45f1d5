#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "uvsram/rng.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

// Walk-on-spheres estimate of a harmonic function on the unit square at the
// boundary points of the inner square [0.25, 0.75]^2. Dirichlet data
// g(x, y) = x^2 - y^2 + 1 is harmonic, so the exact answer is known; the
// offset keeps every estimate well away from zero, where relative error is
// ill-conditioned.

inline constexpr double kWalkEpsilon = 1e-4;

inline double mc_boundary_function(double x, double y) { return x * x - y * y + 1.0; }

struct McInput {
  std::vector<double> points;          // x0, y0, x1, y1, ...
  std::vector<std::uint64_t> rng;      // per-point xorshift64* state
};

inline McInput make_mc_input(const WorkloadConfig& cfg) {
  const std::uint32_t n = cfg.size.mc_points;
  const std::uint32_t per_side = n / 4;
  McInput in;
  in.points.resize(2ull * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double t = 0.25 + 0.5 * (double(i % per_side) + 0.5) / per_side;
    double x = 0, y = 0;
    switch (i / per_side) {
      case 0: x = t; y = 0.25; break;   // bottom
      case 1: x = 0.75; y = t; break;   // right
      case 2: x = t; y = 0.75; break;   // top
      default: x = 0.25; y = t; break;  // left
    }
    in.points[2ull * i] = x;
    in.points[2ull * i + 1] = y;
  }
  Rng rng = Rng::stream(cfg.input_seed, 0x6d6f6e7465ULL);
  in.rng.resize(n);
  for (auto& s : in.rng) {
    s = rng.next();
    if (s == 0) s = 1;
  }
  return in;
}

/// xorshift64* step; returns the new state and a uniform in [0, 1).
inline double xorshift_uniform(std::uint64_t& s) {
  s ^= s >> 12;
  s ^= s << 25;
  s ^= s >> 27;
  return static_cast<double>((s * 0x2545f4914f6cdd1dULL) >> 11) * 0x1.0p-53;
}

/// Header layout of the index region (all 8-byte words).
enum McHeader : std::uint32_t { kMcPoints, kMcRng, kMcOut, kMcWalks, kMcCount, kMcHeaderWords };

inline WorkloadResult run_mc(const WorkloadConfig& cfg, SimMemory& mem) {
  const auto in = make_mc_input(cfg);
  const std::uint32_t n = cfg.size.mc_points;

  const auto hdr = mem.add_region("mc.header", RegionKind::Index, 8ull * kMcHeaderWords);
  const auto pts = mem.add_region("mc.points", RegionKind::Bulk, 16ull * n, 1024);
  const auto rng = mem.add_region("mc.rng", RegionKind::Bulk, 8ull * n, 1024);
  const auto out = mem.add_region("mc.out", RegionKind::Bulk, 8ull * n, 1024);

  const std::vector<std::uint64_t> header = {mem.region(pts).base, mem.region(rng).base,
                                             mem.region(out).base,
                                             cfg.size.mc_walks, n};
  mem.preload(hdr, detail::as_bytes_of(header));
  mem.preload(pts, detail::as_bytes_of(in.points));
  mem.preload(rng, detail::as_bytes_of(in.rng));

  auto word = [&](McHeader w) { return mem.load<std::uint64_t>(hdr, mem.element<std::uint64_t>(hdr, w)); };

  auto kernel = [&] {
    const std::uint64_t p_pts = word(kMcPoints);
    const std::uint64_t p_rng = word(kMcRng);
    const std::uint64_t p_out = word(kMcOut);
    const std::uint64_t count = word(kMcCount);

    auto boundary_value = [&](double x, double y) {
      detail::require_finite(x, "walk exit");
      detail::require_finite(y, "walk exit");
      return mc_boundary_function(std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0));
    };

    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t walks = word(kMcWalks);
      double sum = 0.0;
      for (std::uint64_t w = 0; w < walks; ++w) {
        double x = mem.load<double>(pts, p_pts + 16 * i);
        double y = mem.load<double>(pts, p_pts + 16 * i + 8);
        detail::require_finite(x, "walk start");
        detail::require_finite(y, "walk start");
        for (std::uint32_t step = 0;; ++step) {
          const double d = std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
          if (d < kWalkEpsilon || step >= cfg.size.mc_walk_step_cap) break;
          std::uint64_t s = mem.load<std::uint64_t>(rng, p_rng + 8 * i);
          const double u = xorshift_uniform(s);
          mem.store(rng, p_rng + 8 * i, s);
          const double angle = 2.0 * std::numbers::pi * u;
          x += d * std::cos(angle);
          y += d * std::sin(angle);
        }
        sum += boundary_value(x, y);
      }
      mem.store(out, p_out + 8 * i, sum / double(walks));
    }
  };
  const RegionId outs[] = {out};
  return detail::guarded_run(mem, kernel, outs, {{"estimates", ElementType::F64, {n}}});
}

}  // namespace uvsram
