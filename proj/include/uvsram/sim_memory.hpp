#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "uvsram/cache.hpp"
#include "uvsram/crash.hpp"

namespace uvsram {

/// Index tables (pointer/offset tables) live below all bulk data.
enum class RegionKind { Index, Bulk };

struct Region {
  std::string name;
  RegionKind kind;
  std::uint64_t base;
  std::uint64_t limit;  // one past the last byte

  std::uint64_t size() const noexcept { return limit - base; }
  bool contains(std::uint64_t addr, std::uint64_t len) const noexcept {
    return addr >= base && len <= size() && addr - base <= size() - len;
  }
};

using RegionId = std::uint32_t;

/// Sandboxed address space for one workload run.
///
/// Regions are carved out of a contiguous range starting at `base`, in
/// allocation order. Every typed load/store names the region it targets and
/// is bounds-checked against it; a miss raises CrashSignal(OutOfRange), the
/// sandbox analogue of a segmentation fault. Each load/store counts as one
/// step against the budget.
///
/// With `cached == true` data accesses go through the L1-D model, otherwise
/// straight to the fault-free store (reference runs).
class SimMemory {
 public:
  /// Looks like a user-space heap pointer: many set high bits.
  static constexpr std::uint64_t kDefaultBase = 0x5555'5555'0000ULL;

  explicit SimMemory(CacheGeometry geometry = {}, std::uint64_t step_budget = UINT64_MAX,
                     bool cached = true, std::uint64_t base = kDefaultBase)
      : store_(base, 0), line_bytes_(geometry.line_bytes), step_budget_(step_budget) {
    if (cached) cache_ = std::make_unique<Cache>(geometry, store_);
  }

  SimMemory(const SimMemory&) = delete;
  SimMemory& operator=(const SimMemory&) = delete;

  RegionId add_region(std::string name, RegionKind kind, std::uint64_t size,
                      std::uint64_t align = 64) {
    if (size == 0) throw std::invalid_argument("add_region: empty region " + name);
    if (align == 0 || (align & (align - 1)) != 0)
      throw std::invalid_argument("add_region: alignment must be a power of two");
    std::uint64_t begin = store_.base() + store_.size();
    begin = (begin + align - 1) & ~(align - 1);
    regions_.push_back({std::move(name), kind, begin, begin + size});
    // Whole lines, so a cache fill of the last line stays inside the store.
    const std::uint64_t end = begin + size - store_.base();
    store_.resize((end + line_bytes_ - 1) / line_bytes_ * line_bytes_);
    return static_cast<RegionId>(regions_.size() - 1);
  }

  const Region& region(RegionId id) const { return regions_.at(id); }
  std::span<const Region> regions() const noexcept { return regions_; }
  std::uint64_t base() const noexcept { return store_.base(); }
  std::uint64_t size() const noexcept { return store_.size(); }

  template <typename T>
  T load(RegionId id, std::uint64_t addr) {
    static_assert(std::is_trivially_copyable_v<T>);
    check(id, addr, sizeof(T));
    std::uint8_t buf[sizeof(T)];
    if (cache_) cache_->read(addr, buf);
    else store_.read(addr, buf);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
  }

  template <typename T>
  void store(RegionId id, std::uint64_t addr, const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    check(id, addr, sizeof(T));
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if (cache_) cache_->write(addr, buf);
    else store_.write(addr, buf);
  }

  /// Element `index` of a region viewed as an array of T.
  template <typename T>
  std::uint64_t element(RegionId id, std::uint64_t index) const {
    return regions_[id].base + index * sizeof(T);
  }

  /// Loader path: initialize memory without going through the cache.
  void preload(RegionId id, std::span<const std::uint8_t> bytes, std::uint64_t offset = 0) {
    const auto& r = regions_.at(id);
    if (!r.contains(r.base + offset, bytes.size()))
      throw std::out_of_range("preload: data does not fit region " + r.name);
    std::memcpy(store_.bytes().data() + (r.base + offset - store_.base()), bytes.data(),
                bytes.size());
  }

  template <typename T>
  void preload_values(RegionId id, std::span<const T> values) {
    preload(id, {reinterpret_cast<const std::uint8_t*>(values.data()), values.size_bytes()});
  }

  /// Region contents as held in the backing store. Call `flush` first.
  std::vector<std::uint8_t> snapshot(RegionId id) const {
    const auto& r = regions_.at(id);
    const auto* p = store_.bytes().data() + (r.base - store_.base());
    return {p, p + r.size()};
  }

  void install_fault_map(const FaultMap& map) {
    if (!cache_) throw std::logic_error("install_fault_map on an uncached memory");
    cache_->install_fault_map(map);
  }

  void flush() {
    if (cache_) cache_->flush();
  }

  Cache* cache() noexcept { return cache_.get(); }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t step_budget() const noexcept { return step_budget_; }

  /// Counts one step of non-memory work (loop back-edges in long loops).
  void tick_step() {
    if (++steps_ > step_budget_)
      throw CrashSignal(CrashReason::StepBudgetExceeded,
                        "step budget " + std::to_string(step_budget_) + " exhausted");
  }

 private:
  void check(RegionId id, std::uint64_t addr, std::uint64_t len) {
    tick_step();
    const auto& r = regions_[id];
    if (!r.contains(addr, len))
      throw CrashSignal(CrashReason::OutOfRange,
                        "access outside region " + r.name);
  }

  FlatStore store_;
  std::uint64_t line_bytes_;
  std::unique_ptr<Cache> cache_;
  std::vector<Region> regions_;
  std::uint64_t steps_ = 0;
  std::uint64_t step_budget_;
};

}  // namespace uvsram
