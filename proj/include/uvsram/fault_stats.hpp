#pragma once

#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

#include "uvsram/fault_map.hpp"

namespace uvsram {

/// Row-major rows x cols matrix of per-bit fault frequencies.
struct Heatmap {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> values;

  double at(std::uint32_t r, std::uint32_t c) const { return values[std::size_t{r} * cols + c]; }

  double row_mean(std::uint32_t r) const {
    double s = 0.0;
    for (std::uint32_t c = 0; c < cols; ++c) s += at(r, c);
    return s / cols;
  }
};

inline Heatmap probability_heatmap(std::span<const FaultMap> corpus) {
  if (corpus.empty()) throw std::invalid_argument("probability_heatmap: empty corpus");
  const SramGeometry g = corpus.front().geometry;
  Heatmap h{g.rows, g.cols, std::vector<double>(g.capacity(), 0.0)};
  for (const auto& m : corpus) {
    if (!(m.geometry == g))
      throw std::invalid_argument("probability_heatmap: mixed geometries");
    for (const auto& f : m.faults) h.values[f.location.linear(g)] += 1.0;
  }
  for (auto& v : h.values) v /= double(corpus.size());
  return h;
}

/// Mean Manhattan distance over all unordered fault pairs (0 for < 2 faults).
inline double mean_pairwise_manhattan(const FaultMap& map) {
  const auto& f = map.faults;
  if (f.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      total += std::abs(std::int64_t(f[i].location.row) - std::int64_t(f[j].location.row)) +
               std::abs(std::int64_t(f[i].location.col) - std::int64_t(f[j].location.col));
  return total / (double(f.size()) * double(f.size() - 1) / 2.0);
}

/// Fraction of faults whose column holds at least one other fault.
inline double same_column_fraction(const FaultMap& map) {
  if (map.faults.empty()) return 0.0;
  std::vector<std::uint32_t> per_col(map.geometry.cols, 0);
  for (const auto& f : map.faults) ++per_col[f.location.col];
  std::size_t shared = 0;
  for (const auto& f : map.faults)
    if (per_col[f.location.col] > 1) ++shared;
  return double(shared) / double(map.faults.size());
}

}  // namespace uvsram
