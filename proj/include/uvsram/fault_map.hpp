#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace uvsram {

/// Lowest and highest modeled supply voltage, and the sweep step.
inline constexpr int kMinVoltageMv = 540;
inline constexpr int kMaxVoltageMv = 600;
inline constexpr int kVoltageStepMv = 10;

/// The seven sweep points 540, 550, ..., 600 mV.
inline std::vector<int> default_voltages() {
  std::vector<int> v;
  for (int mv = kMinVoltageMv; mv <= kMaxVoltageMv; mv += kVoltageStepMv)
    v.push_back(mv);
  return v;
}

inline bool is_sweep_voltage(int mv) {
  return mv >= kMinVoltageMv && mv <= kMaxVoltageMv &&
         (mv - kMinVoltageMv) % kVoltageStepMv == 0;
}

/// 2D bit layout of one SRAM array. Row index grows toward higher addresses.
struct SramGeometry {
  std::uint32_t rows = 128;
  std::uint32_t cols = 128;

  constexpr std::uint64_t capacity() const noexcept {
    return std::uint64_t{rows} * cols;
  }
  constexpr bool valid() const noexcept { return rows >= 1 && cols >= 1; }
  friend constexpr bool operator==(const SramGeometry&,
                                   const SramGeometry&) = default;
};

struct BitLocation {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  constexpr std::uint64_t linear(const SramGeometry& g) const noexcept {
    return std::uint64_t{row} * g.cols + col;
  }
  static constexpr BitLocation from_linear(std::uint64_t index,
                                           const SramGeometry& g) noexcept {
    return {static_cast<std::uint32_t>(index / g.cols),
            static_cast<std::uint32_t>(index % g.cols)};
  }
  constexpr bool inside(const SramGeometry& g) const noexcept {
    return row < g.rows && col < g.cols;
  }
  friend constexpr auto operator<=>(const BitLocation&,
                                    const BitLocation&) = default;
};

enum class CorruptionKind : std::uint8_t { StuckAt0, StuckAt1, BitFlip };

struct Permanent {
  friend constexpr bool operator==(const Permanent&, const Permanent&) = default;
};
/// Fires once, at the first access at or after `fire_tick`, then disappears.
struct Transient {
  std::uint64_t fire_tick = 0;
  friend constexpr bool operator==(const Transient&, const Transient&) = default;
};
/// Active for ticks in [start_tick, start_tick + duration).
struct Intermittent {
  std::uint64_t start_tick = 0;
  std::uint64_t duration = 0;
  friend constexpr bool operator==(const Intermittent&,
                                   const Intermittent&) = default;
};

using FaultTiming = std::variant<Permanent, Transient, Intermittent>;

struct FaultSpec {
  BitLocation location;
  FaultTiming timing = Permanent{};
  CorruptionKind kind = CorruptionKind::StuckAt0;
  /// Highest supply voltage at which the bit is faulty (hardware-like maps).
  std::optional<int> onset_voltage_mv;

  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

/// Faults of one SRAM instance at one supply voltage.
///
/// `faults` is kept sorted by linear bit index; `validate` enforces the
/// uniqueness and range invariants.
struct FaultMap {
  std::string sram_id = "sram";
  int voltage_mv = kMinVoltageMv;
  SramGeometry geometry;
  std::vector<FaultSpec> faults;

  std::size_t size() const noexcept { return faults.size(); }
  bool empty() const noexcept { return faults.empty(); }

  void sort() {
    std::sort(faults.begin(), faults.end(),
              [this](const FaultSpec& a, const FaultSpec& b) {
                return a.location.linear(geometry) < b.location.linear(geometry);
              });
  }

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const {
    if (!geometry.valid())
      throw std::invalid_argument("fault map: geometry must be at least 1x1");
    if (faults.size() > geometry.capacity())
      throw std::invalid_argument("fault map: more faults than bits");
    std::vector<std::uint64_t> seen;
    seen.reserve(faults.size());
    for (const auto& f : faults) {
      if (!f.location.inside(geometry))
        throw std::invalid_argument("fault map: location out of range");
      if (f.onset_voltage_mv &&
          (*f.onset_voltage_mv < kMinVoltageMv ||
           *f.onset_voltage_mv > kMaxVoltageMv))
        throw std::invalid_argument("fault map: onset voltage out of range");
      seen.push_back(f.location.linear(geometry));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw std::invalid_argument("fault map: duplicate location");
  }

  friend bool operator==(const FaultMap&, const FaultMap&) = default;
};

}  // namespace uvsram
