#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uvsram/cache.hpp"
#include "uvsram/crash.hpp"
#include "uvsram/fault_map.hpp"
#include "uvsram/sim_memory.hpp"

namespace uvsram {

enum class Benchmark { Jacobi, Blackscholes, Dct, MonteCarlo, Sobel, KMeans };

inline constexpr std::array<Benchmark, 6> kAllBenchmarks = {
    Benchmark::Jacobi, Benchmark::Blackscholes, Benchmark::Dct,
    Benchmark::MonteCarlo, Benchmark::Sobel, Benchmark::KMeans};

inline std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::Jacobi: return "jacobi";
    case Benchmark::Blackscholes: return "blackscholes";
    case Benchmark::Dct: return "dct";
    case Benchmark::MonteCarlo: return "mc";
    case Benchmark::Sobel: return "sobel";
    case Benchmark::KMeans: return "kmeans";
  }
  return "?";
}

inline std::optional<Benchmark> benchmark_from_string(std::string_view s) {
  for (auto b : kAllBenchmarks)
    if (to_string(b) == s) return b;
  return std::nullopt;
}

/// Problem sizes. Defaults are desk-scale so a full campaign runs in minutes.
struct ProblemSize {
  std::uint32_t jacobi_n = 32;
  std::uint32_t jacobi_max_iter = 500;
  double jacobi_tolerance = 1e-6;
  std::uint32_t options = 1024;
  std::uint32_t image_side = 64;  // DCT and Sobel, multiple of 8
  std::uint32_t mc_points = 128;   // multiple of 4
  std::uint32_t mc_walks = 256;
  std::uint32_t mc_walk_step_cap = 100000;
  std::uint32_t kmeans_points = 512;  // multiple of 16
  std::uint32_t kmeans_k = 4;
  std::uint32_t kmeans_max_iter = 50;
};

struct WorkloadConfig {
  Benchmark benchmark = Benchmark::Jacobi;
  ProblemSize size;
  std::uint64_t input_seed = 1;
  /// Maximum loads/stores; 0 selects the per-benchmark default.
  std::uint64_t step_budget = 0;
};

enum class ElementType { U8, I32, F64 };

inline std::string_view to_string(ElementType t) {
  switch (t) {
    case ElementType::U8: return "u8";
    case ElementType::I32: return "i32";
    case ElementType::F64: return "f64";
  }
  return "?";
}

inline std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::U8: return 1;
    case ElementType::I32: return 4;
    case ElementType::F64: return 8;
  }
  return 1;
}

/// One typed field of an output buffer; fields are laid out back to back.
struct OutputField {
  std::string name;
  ElementType type;
  std::vector<std::size_t> shape;

  std::size_t count() const {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
  std::size_t bytes() const { return count() * element_size(type); }
  friend bool operator==(const OutputField&, const OutputField&) = default;
};

struct Output {
  std::vector<std::uint8_t> bytes;
  std::vector<OutputField> fields;

  /// Raw bytes of field `i`.
  std::span<const std::uint8_t> field_bytes(std::size_t i) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < i; ++k) off += fields[k].bytes();
    return std::span<const std::uint8_t>(bytes).subspan(off, fields[i].bytes());
  }

  template <typename T>
  std::vector<T> field_values(std::size_t i) const {
    auto raw = field_bytes(i);
    std::vector<T> v(raw.size() / sizeof(T));
    std::memcpy(v.data(), raw.data(), v.size() * sizeof(T));
    return v;
  }
};

struct Crash {
  CrashReason reason;
  std::string detail;
};

struct WorkloadResult {
  std::variant<Output, Crash> value;

  bool crashed() const { return std::holds_alternative<Crash>(value); }
  const Output& output() const { return std::get<Output>(value); }
  const Crash& crash() const { return std::get<Crash>(value); }
};

/// Text descriptor accompanying a flat binary output dump.
inline std::string describe_output(Benchmark b, const Output& out) {
  std::string s = "benchmark=" + std::string(to_string(b)) + "\n";
  for (const auto& f : out.fields) {
    s += "field=" + f.name + " " + std::string(to_string(f.type)) + " ";
    for (std::size_t i = 0; i < f.shape.size(); ++i) {
      if (i) s += 'x';
      s += std::to_string(f.shape[i]);
    }
    s += '\n';
  }
  return s;
}

namespace detail {

/// Runs `kernel(memory)`, turning crash signals into a Crash result and
/// otherwise returning the flushed output regions.
template <typename Kernel>
WorkloadResult guarded_run(SimMemory& memory, Kernel&& kernel,
                           std::span<const RegionId> output_regions,
                           std::vector<OutputField> fields) {
  try {
    kernel();
    memory.flush();
  } catch (const CrashSignal& sig) {
    return {Crash{sig.reason(), sig.what()}};
  }
  Output out;
  out.fields = std::move(fields);
  for (auto r : output_regions) {
    auto bytes = memory.snapshot(r);
    out.bytes.insert(out.bytes.end(), bytes.begin(), bytes.end());
  }
  return {std::move(out)};
}

/// Loop bound or index derived from floating point must be finite.
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw CrashSignal(CrashReason::NonFiniteControl, what);
}

template <typename T>
std::span<const std::uint8_t> as_bytes_of(const std::vector<T>& v) {
  return {reinterpret_cast<const std::uint8_t*>(v.data()), v.size() * sizeof(T)};
}

}  // namespace detail

}  // namespace uvsram
