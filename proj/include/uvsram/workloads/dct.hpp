#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "uvsram/workloads/image.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

/// Orthonormal 8-point DCT-II basis, basis[u * 8 + x].
inline std::vector<double> dct_basis() {
  std::vector<double> c(64);
  for (int u = 0; u < 8; ++u)
    for (int x = 0; x < 8; ++x)
      c[u * 8 + x] = (u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0)) *
                     std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
  return c;
}

/// JPEG-style 8x8 block transform round trip: level shift, separable forward
/// DCT, rounding to 16-bit integer coefficients, inverse DCT, clamp to 8 bits.
///
/// Index region: one pointer per block to its top-left pixel. Output pixels
/// are addressed relative to the same pointer.
inline WorkloadResult run_dct(const WorkloadConfig& cfg, SimMemory& mem) {
  const std::uint32_t side = cfg.size.image_side;
  const std::uint32_t per_row = side / 8;
  const std::uint32_t blocks = per_row * per_row;
  const auto image = make_test_image(side, cfg.input_seed);
  const auto basis = dct_basis();

  const auto table = mem.add_region("dct.blocks", RegionKind::Index, 8ull * blocks);
  const auto cosr = mem.add_region("dct.basis", RegionKind::Bulk, 8ull * 64, 1024);
  const auto tmp = mem.add_region("dct.tmp", RegionKind::Bulk, 8ull * 64, 64);
  const auto src = mem.add_region("dct.image", RegionKind::Bulk, std::uint64_t{side} * side, 1024);
  const auto coef = mem.add_region("dct.coef", RegionKind::Bulk, 128ull * blocks, 1024);
  const auto dst = mem.add_region("dct.out", RegionKind::Bulk, std::uint64_t{side} * side, 1024);

  const std::uint64_t src_base = mem.region(src).base;
  const std::uint64_t dst_base = mem.region(dst).base;
  std::vector<std::uint64_t> ptrs(blocks);
  for (std::uint32_t b = 0; b < blocks; ++b)
    ptrs[b] = src_base + std::uint64_t{b / per_row} * 8 * side + (b % per_row) * 8;
  mem.preload(table, detail::as_bytes_of(ptrs));
  mem.preload(cosr, detail::as_bytes_of(basis));
  mem.preload(src, image);

  auto c = [&](int u, int x) { return mem.load<double>(cosr, mem.element<double>(cosr, u * 8 + x)); };
  auto t_at = [&](int r, int k) { return mem.element<double>(tmp, r * 8 + k); };

  auto kernel = [&] {
    for (std::uint32_t b = 0; b < blocks; ++b) {
      const auto p = mem.load<std::uint64_t>(table, mem.element<std::uint64_t>(table, b));
      const std::uint64_t cbase = mem.region(coef).base + 128ull * b;
      // Forward, rows: tmp[y][u] = sum_x (pix - 128) c[u][x]
      for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
          double s = 0.0;
          for (int x = 0; x < 8; ++x)
            s += (double(mem.load<std::uint8_t>(src, p + std::uint64_t(y) * side + x)) - 128.0) *
                 c(u, x);
          mem.store(tmp, t_at(y, u), s);
        }
      // Forward, columns: coef[v][u] = round(sum_y tmp[y][u] c[v][y])
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
          double s = 0.0;
          for (int y = 0; y < 8; ++y) s += mem.load<double>(tmp, t_at(y, u)) * c(v, y);
          detail::require_finite(s, "dct coefficient");
          const auto q = static_cast<std::int16_t>(std::clamp(std::lround(s), -32768L, 32767L));
          mem.store(coef, cbase + 2ull * (v * 8 + u), q);
        }
      // Inverse, rows: tmp[v][x] = sum_u coef[v][u] c[u][x]
      for (int v = 0; v < 8; ++v)
        for (int x = 0; x < 8; ++x) {
          double s = 0.0;
          for (int u = 0; u < 8; ++u)
            s += double(mem.load<std::int16_t>(coef, cbase + 2ull * (v * 8 + u))) * c(u, x);
          mem.store(tmp, t_at(v, x), s);
        }
      // Inverse, columns: pix[y][x] = clamp(round(sum_v tmp[v][x] c[v][y] + 128))
      for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) {
          double s = 0.0;
          for (int v = 0; v < 8; ++v) s += mem.load<double>(tmp, t_at(v, x)) * c(v, y);
          detail::require_finite(s, "dct pixel");
          const auto pix = static_cast<std::uint8_t>(std::clamp(std::lround(s + 128.0), 0L, 255L));
          mem.store(dst, dst_base + (p - src_base) + std::uint64_t(y) * side + x, pix);
        }
    }
  };
  const RegionId outs[] = {dst};
  return detail::guarded_run(mem, kernel, outs, {{"image", ElementType::U8, {side, side}}});
}

}  // namespace uvsram
