#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "uvsram/fault_map.hpp"
#include "uvsram/rng.hpp"

namespace uvsram {

/// Probability mass over per-SRAM fault counts.
class FaultCountDistribution {
 public:
  FaultCountDistribution() = default;

  explicit FaultCountDistribution(std::map<std::uint64_t, double> masses) {
    double total = 0.0;
    for (auto [count, p] : masses) {
      if (!(p >= 0.0))
        throw std::invalid_argument("fault count distribution: negative mass");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("fault count distribution: masses must sum to 1");
    entries_.clear();
    double acc = 0.0;
    for (auto [count, p] : masses) {
      if (p == 0.0) continue;
      acc += p;
      entries_.push_back({count, p, acc});
    }
    entries_.back().cumulative = 1.0;
  }

  /// Point mass at `count`.
  static FaultCountDistribution point(std::uint64_t count) {
    return FaultCountDistribution({{count, 1.0}});
  }

  /// Default histogram. Counts 2/4/6/8 carry the measured 37/15/9/5 percent;
  /// 10..16 and the log-uniform even tail over [18, 600] fill the rest.
  static FaultCountDistribution default_hardware() {
    std::map<std::uint64_t, double> m{{2, 0.37},  {4, 0.15},  {6, 0.09},
                                      {8, 0.05},  {10, 0.08}, {12, 0.06},
                                      {14, 0.05}, {16, 0.04}};
    constexpr double kTailMass = 0.11;
    double norm = 0.0;
    for (std::uint64_t n = 18; n <= 600; n += 2) norm += 1.0 / double(n);
    for (std::uint64_t n = 18; n <= 600; n += 2)
      m[n] = kTailMass * (1.0 / double(n)) / norm;
    return FaultCountDistribution(std::move(m));
  }

  double mass(std::uint64_t count) const {
    for (const auto& e : entries_)
      if (e.count == count) return e.mass;
    return 0.0;
  }

  std::uint64_t max_count() const { return entries_.back().count; }

  std::uint64_t sample(Rng& rng) const {
    const double u = rng.uniform();
    for (const auto& e : entries_)
      if (u < e.cumulative) return e.count;
    return entries_.back().count;
  }

  std::vector<std::pair<std::uint64_t, double>> masses() const {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto& e : entries_) out.emplace_back(e.count, e.mass);
    return out;
  }

 private:
  struct Entry {
    std::uint64_t count;
    double mass;
    double cumulative;
  };
  std::vector<Entry> entries_{{0, 1.0, 1.0}};
};

inline std::uint64_t sample_fault_count(const FaultCountDistribution& dist,
                                        std::uint64_t seed) {
  Rng rng(mix64(seed));
  return dist.sample(rng);
}

/// `count` distinct values from [0, universe), uniform over all subsets
/// (Floyd's algorithm), returned in ascending order.
inline std::vector<std::uint64_t> sample_without_replacement(
    std::uint64_t count, std::uint64_t universe, Rng& rng) {
  if (count > universe)
    throw std::invalid_argument("sample_without_replacement: count > universe");
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = universe - count; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Uniform map with exactly `n_faults` permanent stuck-at-0 bits.
inline FaultMap generate_random_map(std::uint64_t n_faults,
                                    const SramGeometry& geometry,
                                    std::uint64_t seed) {
  if (!geometry.valid()) throw std::invalid_argument("invalid SRAM geometry");
  if (n_faults > geometry.capacity())
    throw std::invalid_argument("generate_random_map: n_faults exceeds capacity");
  Rng rng(mix64(seed ^ 0x7261'6e64'6f6d'0000ULL));
  FaultMap map;
  map.geometry = geometry;
  for (auto idx : sample_without_replacement(n_faults, geometry.capacity(), rng))
    map.faults.push_back({BitLocation::from_linear(idx, geometry), Permanent{}, CorruptionKind::StuckAt0, std::nullopt});
  return map;
}

/// Random counterpart of `hw`: same id, voltage, geometry and fault count.
inline FaultMap match_random_map(const FaultMap& hw, std::uint64_t seed) {
  FaultMap out = generate_random_map(hw.faults.size(), hw.geometry, seed);
  out.sram_id = hw.sram_id;
  out.voltage_mv = hw.voltage_mv;
  return out;
}

/// Parameters of the weak-column vertical-run placement process.
struct SpatialParams {
  FaultCountDistribution count_distribution =
      FaultCountDistribution::default_hardware();
  double mean_run_length = 4.0;
  /// Probability of skipping a row between consecutive faults of a run.
  double gap_probability = 0.2;
  /// Probability that a fault is moved to a uniformly random bit.
  double outlier_probability = 0.05;
  /// Runs start in the bottom `anchor_fraction` of the rows.
  double anchor_fraction = 0.25;
  /// Onset range of the bottom-most bit of each run.
  int anchor_onset_min_mv = 560;
  int anchor_onset_max_mv = kMaxVoltageMv;

  void validate() const {
    if (!(mean_run_length >= 1.0))
      throw std::invalid_argument("mean_run_length must be >= 1");
    if (!(gap_probability >= 0.0 && gap_probability < 1.0))
      throw std::invalid_argument("gap_probability must be in [0, 1)");
    if (!(outlier_probability >= 0.0 && outlier_probability <= 1.0))
      throw std::invalid_argument("outlier_probability must be in [0, 1]");
    if (!(anchor_fraction > 0.0 && anchor_fraction <= 1.0))
      throw std::invalid_argument("anchor_fraction must be in (0, 1]");
    if (anchor_onset_min_mv > anchor_onset_max_mv ||
        !is_sweep_voltage(anchor_onset_min_mv) ||
        !is_sweep_voltage(anchor_onset_max_mv))
      throw std::invalid_argument("anchor onset range must lie on the sweep");
  }
};

/// Hardware-like fault set for one SRAM: every fault carries its onset
/// voltage. Sorted by linear index.
inline std::vector<FaultSpec> generate_hwlike_sram(const SramGeometry& geometry,
                                                   const SpatialParams& params,
                                                   std::uint64_t seed) {
  if (!geometry.valid()) throw std::invalid_argument("invalid SRAM geometry");
  params.validate();
  Rng rng(mix64(seed ^ 0x6877'6c69'6b65'0000ULL));

  const std::uint64_t n = params.count_distribution.sample(rng);
  if (n > geometry.capacity())
    throw std::invalid_argument("sampled fault count exceeds SRAM capacity");
  if (n == 0) return {};

  // Run count and per-run sizes.
  const auto rounded = static_cast<std::uint64_t>(
      std::llround(double(n) / params.mean_run_length));
  const std::uint64_t runs =
      std::clamp<std::uint64_t>(rounded, 1, std::min<std::uint64_t>(geometry.cols, n));
  auto columns = sample_without_replacement(runs, geometry.cols, rng);
  // Fisher-Yates so the +1 remainder is not biased toward low columns.
  for (std::size_t i = columns.size(); i > 1; --i)
    std::swap(columns[i - 1], columns[rng.below(i)]);

  const auto anchor_rows = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(std::llround(geometry.rows * params.anchor_fraction)));
  const std::uint32_t anchor_lo = geometry.rows - anchor_rows;
  const int onset_steps =
      (params.anchor_onset_max_mv - params.anchor_onset_min_mv) / kVoltageStepMv + 1;

  std::vector<char> occupied(geometry.capacity(), 0);
  std::vector<FaultSpec> faults;
  faults.reserve(n);
  std::uint64_t overflow = 0;

  for (std::uint64_t r = 0; r < runs; ++r) {
    const std::uint64_t size = n / runs + (r < n % runs ? 1 : 0);
    const auto col = static_cast<std::uint32_t>(columns[r]);
    std::int64_t row = anchor_lo + static_cast<std::int64_t>(rng.below(anchor_rows));
    int onset = params.anchor_onset_min_mv +
                kVoltageStepMv * static_cast<int>(rng.below(onset_steps));
    std::uint64_t placed = 0;
    while (placed < size && row >= 0) {
      BitLocation loc{static_cast<std::uint32_t>(row), col};
      auto idx = loc.linear(geometry);
      if (!occupied[idx]) {
        occupied[idx] = 1;
        faults.push_back({loc, Permanent{}, CorruptionKind::StuckAt0, onset});
        ++placed;
        if (rng.bernoulli(0.5)) onset = std::max(kMinVoltageMv, onset - kVoltageStepMv);
      }
      --row;
      while (row >= 0 && rng.bernoulli(params.gap_probability)) --row;
    }
    overflow += size - placed;
  }

  auto random_free_bit = [&]() {
    std::uint64_t idx = rng.below(geometry.capacity());
    while (occupied[idx]) idx = rng.below(geometry.capacity());
    return idx;
  };

  // Runs that hit the top edge spill their remainder to random bits.
  for (std::uint64_t i = 0; i < overflow; ++i) {
    auto idx = random_free_bit();
    occupied[idx] = 1;
    int onset = params.anchor_onset_min_mv +
                kVoltageStepMv * static_cast<int>(rng.below(onset_steps));
    faults.push_back({BitLocation::from_linear(idx, geometry), Permanent{},
                      CorruptionKind::StuckAt0, onset});
  }

  for (auto& f : faults) {
    if (!rng.bernoulli(params.outlier_probability)) continue;
    auto idx = random_free_bit();
    occupied[f.location.linear(geometry)] = 0;
    occupied[idx] = 1;
    f.location = BitLocation::from_linear(idx, geometry);
  }

  std::sort(faults.begin(), faults.end(), [&](const auto& a, const auto& b) {
    return a.location.linear(geometry) < b.location.linear(geometry);
  });
  return faults;
}

/// One simulated SRAM instance with per-bit onset voltages.
struct HwSram {
  std::string sram_id;
  SramGeometry geometry;
  std::vector<FaultSpec> faults;
};

/// Faults active at `voltage_mv`: exactly those with onset >= voltage.
inline FaultMap derive_map_at_voltage(const HwSram& sram, int voltage_mv) {
  if (voltage_mv < kMinVoltageMv || voltage_mv > kMaxVoltageMv)
    throw std::invalid_argument("voltage " + std::to_string(voltage_mv) +
                                " mV outside modeled window [540, 600]");
  FaultMap map;
  map.sram_id = sram.sram_id;
  map.voltage_mv = voltage_mv;
  map.geometry = sram.geometry;
  for (const auto& f : sram.faults)
    if (f.onset_voltage_mv.value_or(kMinVoltageMv) >= voltage_mv)
      map.faults.push_back(f);
  return map;
}

struct CorpusParams {
  SramGeometry geometry;
  SpatialParams spatial;
  /// Share of SRAMs that show any fault at the lowest voltage (2174/14420).
  double faulty_fraction = 2174.0 / 14420.0;
  std::vector<int> voltages = default_voltages();

  void validate() const {
    if (!geometry.valid()) throw std::invalid_argument("invalid SRAM geometry");
    spatial.validate();
    if (!(faulty_fraction >= 0.0 && faulty_fraction <= 1.0))
      throw std::invalid_argument("faulty_fraction must be in [0, 1]");
    if (voltages.empty()) throw std::invalid_argument("empty voltage list");
    for (int v : voltages)
      if (!is_sweep_voltage(v))
        throw std::invalid_argument("voltage " + std::to_string(v) +
                                    " mV is not a sweep point");
  }
};

struct Corpus {
  std::vector<HwSram> srams;
  /// srams.size() * voltages.size() maps, SRAM-major, voltages ascending.
  std::vector<FaultMap> maps;
};

inline std::string sram_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sram%05llu",
                static_cast<unsigned long long>(index));
  return buf;
}

/// Stream key for the matched random map of (sram, voltage).
inline std::uint64_t matched_map_seed(std::uint64_t corpus_seed,
                                      std::uint64_t sram_index, int voltage_mv) {
  return Rng::stream(corpus_seed, sram_index, 0x1000 + std::uint64_t(voltage_mv)).next();
}

inline HwSram generate_sram(std::uint64_t index, const CorpusParams& params,
                            std::uint64_t seed) {
  HwSram sram{sram_name(index), params.geometry, {}};
  Rng pick = Rng::stream(seed, index, 0);
  if (pick.bernoulli(params.faulty_fraction))
    sram.faults = generate_hwlike_sram(params.geometry, params.spatial,
                                       Rng::stream(seed, index, 1).next());
  return sram;
}

inline Corpus generate_corpus(std::uint64_t n_srams, const CorpusParams& params,
                              std::uint64_t seed) {
  if (n_srams < 1) throw std::invalid_argument("generate_corpus: n_srams must be >= 1");
  params.validate();
  auto voltages = params.voltages;
  std::sort(voltages.begin(), voltages.end());
  Corpus corpus;
  corpus.srams.reserve(n_srams);
  corpus.maps.reserve(n_srams * voltages.size());
  for (std::uint64_t i = 0; i < n_srams; ++i) {
    corpus.srams.push_back(generate_sram(i, params, seed));
    for (int v : voltages)
      corpus.maps.push_back(derive_map_at_voltage(corpus.srams.back(), v));
  }
  return corpus;
}

}  // namespace uvsram
