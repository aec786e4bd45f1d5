#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "uvsram/rng.hpp"

namespace uvsram {

/// Synthetic 8-bit grayscale test card: diagonal gradient, a few flat
/// rectangles and discs with hard edges, light noise.
inline std::vector<std::uint8_t> make_test_image(std::uint32_t side, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0x696d616765ULL);
  std::vector<double> img(std::size_t{side} * side);
  for (std::uint32_t y = 0; y < side; ++y)
    for (std::uint32_t x = 0; x < side; ++x)
      img[std::size_t{y} * side + x] = 40.0 + 120.0 * (x + y) / (2.0 * side);

  for (int k = 0; k < 3; ++k) {
    const auto x0 = static_cast<std::uint32_t>(rng.below(side / 2));
    const auto y0 = static_cast<std::uint32_t>(rng.below(side / 2));
    const auto w = static_cast<std::uint32_t>(side / 8 + rng.below(side / 3));
    const auto h = static_cast<std::uint32_t>(side / 8 + rng.below(side / 3));
    const double level = 20.0 + 215.0 * rng.uniform();
    for (std::uint32_t y = y0; y < std::min(side, y0 + h); ++y)
      for (std::uint32_t x = x0; x < std::min(side, x0 + w); ++x)
        img[std::size_t{y} * side + x] = level;
  }
  for (int k = 0; k < 2; ++k) {
    const double cx = side * rng.uniform(), cy = side * rng.uniform();
    const double r = side * (0.08 + 0.15 * rng.uniform());
    const double level = 20.0 + 215.0 * rng.uniform();
    for (std::uint32_t y = 0; y < side; ++y)
      for (std::uint32_t x = 0; x < side; ++x)
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
          img[std::size_t{y} * side + x] = level;
  }

  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double noisy = img[i] + 6.0 * (rng.uniform() - 0.5);
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
  }
  return out;
}

/// Binary PGM (P5), 8-bit.
inline std::string encode_pgm(std::uint32_t width, std::uint32_t height,
                              const std::vector<std::uint8_t>& pixels) {
  std::string s = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  s.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return s;
}

}  // namespace uvsram
