#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "uvsram/workloads/image.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

inline constexpr int kSobelX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
inline constexpr int kSobelY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};

/// Gradient magnitude min(255, round(sqrt(gx^2 + gy^2))), clamp-to-edge.
inline std::uint8_t sobel_magnitude(int gx, int gy) {
  const long m = std::lround(std::sqrt(double(gx) * gx + double(gy) * gy));
  return static_cast<std::uint8_t>(std::min(255L, m));
}

/// 3x3 Sobel edge detector. Input rows are reached through the row-pointer
/// table (the index region).
inline WorkloadResult run_sobel(const WorkloadConfig& cfg, SimMemory& mem) {
  const std::uint32_t side = cfg.size.image_side;
  const auto image = make_test_image(side, cfg.input_seed);

  const auto rows = mem.add_region("sobel.rowptr", RegionKind::Index, 8ull * side);
  const auto src = mem.add_region("sobel.image", RegionKind::Bulk, std::uint64_t{side} * side, 1024);
  const auto dst = mem.add_region("sobel.out", RegionKind::Bulk, std::uint64_t{side} * side, 1024);

  std::vector<std::uint64_t> ptrs(side);
  for (std::uint32_t y = 0; y < side; ++y) ptrs[y] = mem.region(src).base + std::uint64_t{y} * side;
  mem.preload(rows, detail::as_bytes_of(ptrs));
  mem.preload(src, image);

  const int last = static_cast<int>(side) - 1;
  auto kernel = [&] {
    for (int y = 0; y <= last; ++y) {
      for (int x = 0; x <= last; ++x) {
        int gx = 0, gy = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = std::clamp(y + dy, 0, last);
          const auto row = mem.load<std::uint64_t>(rows, mem.element<std::uint64_t>(rows, yy));
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = std::clamp(x + dx, 0, last);
            const int v = mem.load<std::uint8_t>(src, row + xx);
            gx += kSobelX[dy + 1][dx + 1] * v;
            gy += kSobelY[dy + 1][dx + 1] * v;
          }
        }
        mem.store(dst, mem.element<std::uint8_t>(dst, std::uint64_t(y) * side + x),
                  sobel_magnitude(gx, gy));
      }
    }
  };
  const RegionId outs[] = {dst};
  return detail::guarded_run(mem, kernel, outs, {{"image", ElementType::U8, {side, side}}});
}

}  // namespace uvsram
