#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uvsram/crash.hpp"
#include "uvsram/fault_map.hpp"

namespace uvsram {

struct CacheGeometry {
  std::uint32_t num_sets = 16;
  std::uint32_t associativity = 2;
  std::uint32_t line_bytes = 64;

  constexpr std::uint64_t frames() const noexcept {
    return std::uint64_t{num_sets} * associativity;
  }
  constexpr std::uint64_t line_bits() const noexcept { return std::uint64_t{line_bytes} * 8; }
  constexpr std::uint64_t capacity_bits() const noexcept { return frames() * line_bits(); }
  constexpr std::uint64_t capacity_bytes() const noexcept { return frames() * line_bytes; }
  constexpr bool valid() const noexcept {
    return num_sets >= 1 && associativity >= 1 && line_bytes >= 1;
  }
  friend constexpr bool operator==(const CacheGeometry&, const CacheGeometry&) = default;
};

struct CacheBitAddr {
  std::uint32_t set = 0;
  std::uint32_t way = 0;
  std::uint32_t bit_in_line = 0;
  friend constexpr bool operator==(const CacheBitAddr&, const CacheBitAddr&) = default;
};

/// Line-major projection of an SRAM bit onto the data array: consecutive
/// lines fill way 0 of every set, then way 1, and so on.
inline CacheBitAddr map_fault_to_cache(std::uint64_t linear_bit, const CacheGeometry& g) {
  if (linear_bit >= g.capacity_bits())
    throw std::out_of_range("map_fault_to_cache: bit " + std::to_string(linear_bit) +
                            " beyond cache capacity");
  const std::uint64_t line = linear_bit / g.line_bits();
  return {static_cast<std::uint32_t>(line % g.num_sets),
          static_cast<std::uint32_t>(line / g.num_sets),
          static_cast<std::uint32_t>(linear_bit % g.line_bits())};
}

/// Next level of the hierarchy. Addresses outside the store raise a crash.
class BackingStore {
 public:
  virtual ~BackingStore() = default;
  virtual void read(std::uint64_t addr, std::span<std::uint8_t> out) = 0;
  virtual void write(std::uint64_t addr, std::span<const std::uint8_t> in) = 0;
};

/// Fault-free flat byte array mapped at [base, base + size).
class FlatStore final : public BackingStore {
 public:
  explicit FlatStore(std::uint64_t base = 0, std::uint64_t size = 0)
      : base_(base), bytes_(size, 0) {}

  std::uint64_t base() const noexcept { return base_; }
  std::uint64_t size() const noexcept { return bytes_.size(); }
  void resize(std::uint64_t size) { bytes_.resize(size, 0); }

  bool contains(std::uint64_t addr, std::uint64_t len) const noexcept {
    return addr >= base_ && len <= bytes_.size() && addr - base_ <= bytes_.size() - len;
  }

  void read(std::uint64_t addr, std::span<std::uint8_t> out) override {
    check(addr, out.size());
    std::memcpy(out.data(), bytes_.data() + (addr - base_), out.size());
  }
  void write(std::uint64_t addr, std::span<const std::uint8_t> in) override {
    check(addr, in.size());
    std::memcpy(bytes_.data() + (addr - base_), in.data(), in.size());
  }

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::span<std::uint8_t> bytes() noexcept { return bytes_; }

 private:
  void check(std::uint64_t addr, std::uint64_t len) const {
    if (!contains(addr, len))
      throw CrashSignal(CrashReason::OutOfRange,
                        "unmapped access at 0x" + to_hex(addr));
  }
  static std::string to_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(v));
    return buf;
  }

  std::uint64_t base_;
  std::vector<std::uint8_t> bytes_;
};

enum class AccessKind { Read, Write };

/// One request confined to a single cache line.
struct AccessRequest {
  AccessKind kind = AccessKind::Read;
  std::uint64_t address = 0;
  std::uint32_t length = 1;
  std::span<const std::uint8_t> payload{};  // writes only
};

/// Set-associative write-back, write-allocate cache with LRU replacement
/// and fault bindings on the data array.
///
/// Every access applies the active faults bound to the touched frame to the
/// stored line, so corrupted bytes travel to the backing store on write-back.
/// Tags, valid and dirty bits are never corrupted.
class Cache final : public BackingStore {
 public:
  struct Binding {
    std::uint32_t bit_in_line;
    FaultSpec fault;
  };

  Cache(CacheGeometry geometry, BackingStore& next)
      : geometry_(geometry), next_(&next) {
    if (!geometry.valid()) throw std::invalid_argument("invalid cache geometry");
    const auto frames = geometry.frames();
    data_.assign(frames * geometry.line_bytes, 0);
    tags_.assign(frames, 0);
    valid_.assign(frames, 0);
    dirty_.assign(frames, 0);
    last_use_.assign(frames, 0);
    bindings_.assign(frames, {});
  }

  Cache(const Cache&) = delete;
  Cache& operator=(const Cache&) = delete;

  const CacheGeometry& geometry() const noexcept { return geometry_; }
  std::uint64_t tick() const noexcept { return tick_; }

  /// Replace all bindings with those of `map`. Capacities must match.
  void install_fault_map(const FaultMap& map) {
    if (map.geometry.capacity() != geometry_.capacity_bits())
      throw std::invalid_argument(
          "install_fault_map: SRAM capacity " + std::to_string(map.geometry.capacity()) +
          " bits does not match cache data capacity " +
          std::to_string(geometry_.capacity_bits()) + " bits");
    clear_faults();
    for (const auto& f : map.faults) {
      const auto addr = map_fault_to_cache(f.location.linear(map.geometry), geometry_);
      bindings_[frame(addr.set, addr.way)].push_back({addr.bit_in_line, f});
      ++binding_count_;
    }
  }

  void clear_faults() {
    for (auto& b : bindings_) b.clear();
    binding_count_ = 0;
  }

  std::size_t binding_count() const noexcept { return binding_count_; }

  /// Bound fault at `addr`, if any.
  const FaultSpec* binding_at(const CacheBitAddr& addr) const {
    for (const auto& b : bindings_[frame(addr.set, addr.way)])
      if (b.bit_in_line == addr.bit_in_line) return &b.fault;
    return nullptr;
  }

  /// Serve one request. Reads copy `request.length` bytes into `out`.
  void access(const AccessRequest& request, std::span<std::uint8_t> out = {}) {
    const std::uint64_t offset = request.address % geometry_.line_bytes;
    if (request.length == 0 || offset + request.length > geometry_.line_bytes)
      throw std::invalid_argument("access: request must lie within one cache line");
    if (request.kind == AccessKind::Write && request.payload.size() != request.length)
      throw std::invalid_argument("access: payload size mismatch");
    if (request.kind == AccessKind::Read && out.size() < request.length)
      throw std::invalid_argument("access: output buffer too small");

    const std::uint64_t f = lookup_or_fill(request.address);
    std::uint8_t* line = line_data(f);
    if (request.kind == AccessKind::Write) {
      std::memcpy(line + offset, request.payload.data(), request.length);
      dirty_[f] = 1;
      apply_faults(f);
    } else {
      apply_faults(f);
      std::memcpy(out.data(), line + offset, request.length);
    }
    if (!census_.empty())
      for (std::uint32_t i = 0; i < geometry_.line_bytes; ++i)
        census_[f * geometry_.line_bytes + i] |= line[i];
    last_use_[f] = ++use_clock_;
    ++tick_;
  }

  /// Start recording, per frame, the OR of every value its data array holds
  /// after an access. A StuckAt0 on a bit that stays 0 here is masked.
  void enable_census() { census_.assign(data_.size(), 0); }
  /// Census bytes of frame (set, way); empty unless enabled.
  std::span<const std::uint8_t> census(std::uint32_t set, std::uint32_t way) const {
    if (census_.empty()) return {};
    return std::span<const std::uint8_t>(census_).subspan(frame(set, way) * geometry_.line_bytes,
                                                          geometry_.line_bytes);
  }

  /// Arbitrary-length access, split at line boundaries.
  void read(std::uint64_t addr, std::span<std::uint8_t> out) override {
    for_each_chunk(addr, out.size(), [&](std::uint64_t a, std::size_t off, std::uint32_t len) {
      access({AccessKind::Read, a, len, {}}, out.subspan(off, len));
    });
  }
  void write(std::uint64_t addr, std::span<const std::uint8_t> in) override {
    for_each_chunk(addr, in.size(), [&](std::uint64_t a, std::size_t off, std::uint32_t len) {
      access({AccessKind::Write, a, len, in.subspan(off, len)});
    });
  }

  /// Write back every dirty line (faults applied) and invalidate.
  void flush() {
    for (std::uint64_t f = 0; f < geometry_.frames(); ++f) {
      if (valid_[f] && dirty_[f]) write_back(f);
      valid_[f] = 0;
      dirty_[f] = 0;
    }
  }

  bool is_dirty_anywhere() const {
    return std::any_of(dirty_.begin(), dirty_.end(), [](char d) { return d != 0; });
  }

 private:
  std::uint64_t frame(std::uint32_t set, std::uint32_t way) const noexcept {
    return std::uint64_t{set} * geometry_.associativity + way;
  }
  std::uint8_t* line_data(std::uint64_t f) noexcept {
    return data_.data() + f * geometry_.line_bytes;
  }
  std::uint64_t line_address(std::uint64_t f) const noexcept {
    const std::uint64_t set = f / geometry_.associativity;
    return (tags_[f] * geometry_.num_sets + set) * geometry_.line_bytes;
  }

  template <typename Fn>
  void for_each_chunk(std::uint64_t addr, std::size_t size, Fn&& fn) {
    std::size_t done = 0;
    while (done < size) {
      const std::uint64_t a = addr + done;
      const std::uint64_t room = geometry_.line_bytes - a % geometry_.line_bytes;
      const auto len = static_cast<std::uint32_t>(std::min<std::uint64_t>(room, size - done));
      fn(a, done, len);
      done += len;
    }
  }

  std::uint64_t lookup_or_fill(std::uint64_t address) {
    const std::uint64_t line_no = address / geometry_.line_bytes;
    const auto set = static_cast<std::uint32_t>(line_no % geometry_.num_sets);
    const std::uint64_t tag = line_no / geometry_.num_sets;
    const std::uint64_t first = frame(set, 0);
    for (std::uint32_t w = 0; w < geometry_.associativity; ++w)
      if (valid_[first + w] && tags_[first + w] == tag) return first + w;

    // Miss: lowest invalid way, else least recently used.
    std::uint64_t victim = first;
    bool found_invalid = false;
    for (std::uint32_t w = 0; w < geometry_.associativity; ++w) {
      if (!valid_[first + w]) {
        victim = first + w;
        found_invalid = true;
        break;
      }
    }
    if (!found_invalid) {
      for (std::uint32_t w = 1; w < geometry_.associativity; ++w)
        if (last_use_[first + w] < last_use_[victim]) victim = first + w;
      if (dirty_[victim]) write_back(victim);
    }
    // Fill before claiming the frame so a failed fill leaves it untouched.
    next_->read(line_no * geometry_.line_bytes,
                std::span<std::uint8_t>(line_data(victim), geometry_.line_bytes));
    tags_[victim] = tag;
    valid_[victim] = 1;
    dirty_[victim] = 0;
    return victim;
  }

  void write_back(std::uint64_t f) {
    apply_faults(f);
    next_->write(line_address(f),
                 std::span<const std::uint8_t>(line_data(f), geometry_.line_bytes));
    dirty_[f] = 0;
  }

  void apply_faults(std::uint64_t f) {
    auto& list = bindings_[f];
    if (list.empty()) return;
    std::uint8_t* line = line_data(f);
    for (std::size_t i = 0; i < list.size();) {
      const auto& b = list[i];
      bool active = false;
      bool remove = false;
      if (std::holds_alternative<Permanent>(b.fault.timing)) {
        active = true;
      } else if (const auto* t = std::get_if<Transient>(&b.fault.timing)) {
        active = remove = tick_ >= t->fire_tick;
      } else if (const auto* im = std::get_if<Intermittent>(&b.fault.timing)) {
        active = tick_ >= im->start_tick && tick_ - im->start_tick < im->duration;
      }
      if (active) {
        std::uint8_t& byte = line[b.bit_in_line / 8];
        const auto mask = static_cast<std::uint8_t>(1u << (b.bit_in_line % 8));
        switch (b.fault.kind) {
          case CorruptionKind::StuckAt0: byte &= static_cast<std::uint8_t>(~mask); break;
          case CorruptionKind::StuckAt1: byte |= mask; break;
          case CorruptionKind::BitFlip: byte ^= mask; break;
        }
      }
      if (remove) {
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(i));
        --binding_count_;
      } else {
        ++i;
      }
    }
  }

  CacheGeometry geometry_;
  BackingStore* next_;
  std::vector<std::uint8_t> data_;
  std::vector<std::uint64_t> tags_;
  std::vector<char> valid_;
  std::vector<char> dirty_;
  std::vector<std::uint64_t> last_use_;
  std::vector<std::vector<Binding>> bindings_;
  std::vector<std::uint8_t> census_;
  std::size_t binding_count_ = 0;
  std::uint64_t tick_ = 0;
  std::uint64_t use_clock_ = 0;
};

}  // namespace uvsram
