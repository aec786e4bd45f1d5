#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace uvsram {

/// Peak signal-to-noise ratio of 8-bit images, 10 log10(255^2 / MSE).
/// Identical images have no finite PSNR and are rejected.
inline double psnr(std::span<const std::uint8_t> golden, std::span<const std::uint8_t> faulty) {
  if (golden.size() != faulty.size() || golden.empty())
    throw std::invalid_argument("psnr: image sizes differ");
  double sse = 0.0;
  for (std::size_t i = 0; i < golden.size(); ++i) {
    const double d = double(golden[i]) - double(faulty[i]);
    sse += d * d;
  }
  if (sse == 0.0) throw std::invalid_argument("psnr: images are identical");
  const double mse = sse / double(golden.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

inline constexpr double kRelativeErrorFloor = 1e-12;

/// Mean of min(1, |g - f| / max(|g|, 1e-12)). Non-finite terms count as 1.
inline double avg_relative_error(std::span<const double> golden, std::span<const double> faulty) {
  if (golden.size() != faulty.size() || golden.empty())
    throw std::invalid_argument("avg_relative_error: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < golden.size(); ++i) {
    const double g = golden[i], f = faulty[i];
    if (g == f) continue;
    double term = std::abs(g - f) / std::max(std::abs(g), kRelativeErrorFloor);
    if (!(term <= 1.0)) term = 1.0;  // also catches NaN
    total += term;
  }
  return total / double(golden.size());
}

/// Percentage of points whose faulty label maps to their golden label under
/// a one-to-one label matching chosen greedily from the confusion matrix
/// (largest count first, ties to the smaller golden then faulty label).
inline double cluster_accuracy(std::span<const std::int32_t> golden,
                               std::span<const std::int32_t> faulty) {
  if (golden.size() != faulty.size() || golden.empty())
    throw std::invalid_argument("cluster_accuracy: length mismatch");
  std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> confusion;
  for (std::size_t i = 0; i < golden.size(); ++i) ++confusion[{golden[i], faulty[i]}];

  std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, std::size_t>> cells(
      confusion.begin(), confusion.end());
  std::stable_sort(cells.begin(), cells.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::int32_t, bool> used_g, used_f;
  std::size_t matched = 0;
  for (const auto& [labels, count] : cells) {
    if (used_g[labels.first] || used_f[labels.second]) continue;
    used_g[labels.first] = used_f[labels.second] = true;
    matched += count;
  }
  return 100.0 * double(matched) / double(golden.size());
}

}  // namespace uvsram
