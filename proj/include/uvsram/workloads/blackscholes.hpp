#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "uvsram/rng.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

/// One European option. `put` is 0.0 for a call, 1.0 for a put.
struct OptionRecord {
  double spot;
  double strike;
  double rate;
  double volatility;
  double years;
  double put;
};
static_assert(sizeof(OptionRecord) == 48);

inline constexpr std::uint32_t kOptionsPerBlock = 64;

inline std::vector<OptionRecord> make_blackscholes_input(const WorkloadConfig& cfg) {
  Rng rng = Rng::stream(cfg.input_seed, 0x626c61636bULL);
  std::vector<OptionRecord> opts(cfg.size.options);
  for (auto& o : opts) {
    o.spot = 10.0 + 90.0 * rng.uniform();
    o.strike = o.spot * (0.8 + 0.4 * rng.uniform());
    o.rate = 0.01 + 0.09 * rng.uniform();
    o.volatility = 0.05 + 0.6 * rng.uniform();
    o.years = 0.1 + 1.9 * rng.uniform();
    o.put = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  return opts;
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

inline double black_scholes_price(double spot, double strike, double rate,
                                  double volatility, double years, bool put) {
  const double sqrt_t = std::sqrt(years);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * volatility * volatility) * years) /
                    (volatility * sqrt_t);
  const double d2 = d1 - volatility * sqrt_t;
  const double discount = strike * std::exp(-rate * years);
  if (put) return discount * normal_cdf(-d2) - spot * normal_cdf(-d1);
  return spot * normal_cdf(d1) - discount * normal_cdf(d2);
}

/// Prices every option. Options are stored in blocks of 64 records reached
/// through the block table (the index region).
inline WorkloadResult run_blackscholes(const WorkloadConfig& cfg, SimMemory& mem) {
  const auto opts = make_blackscholes_input(cfg);
  const std::uint32_t n = cfg.size.options;
  const std::uint32_t blocks = (n + kOptionsPerBlock - 1) / kOptionsPerBlock;

  const auto table = mem.add_region("bs.blocks", RegionKind::Index, 8ull * blocks);
  const auto data =
      mem.add_region("bs.options", RegionKind::Bulk, sizeof(OptionRecord) * std::uint64_t{n}, 1024);
  const auto prices = mem.add_region("bs.prices", RegionKind::Bulk, 8ull * n, 1024);

  std::vector<std::uint64_t> ptrs(blocks);
  for (std::uint32_t k = 0; k < blocks; ++k)
    ptrs[k] = mem.region(data).base + sizeof(OptionRecord) * std::uint64_t{k} * kOptionsPerBlock;
  mem.preload(table, detail::as_bytes_of(ptrs));
  mem.preload(data, detail::as_bytes_of(opts));

  auto kernel = [&] {
    for (std::uint32_t k = 0; k < blocks; ++k) {
      const auto block = mem.load<std::uint64_t>(table, mem.element<std::uint64_t>(table, k));
      const std::uint32_t count = std::min(kOptionsPerBlock, n - k * kOptionsPerBlock);
      for (std::uint32_t o = 0; o < count; ++o) {
        const std::uint64_t rec = block + sizeof(OptionRecord) * o;
        const double spot = mem.load<double>(data, rec + 0);
        const double strike = mem.load<double>(data, rec + 8);
        const double rate = mem.load<double>(data, rec + 16);
        const double vol = mem.load<double>(data, rec + 24);
        const double years = mem.load<double>(data, rec + 32);
        const double put = mem.load<double>(data, rec + 40);
        const double price = black_scholes_price(spot, strike, rate, vol, years, put != 0.0);
        mem.store(prices, mem.element<double>(prices, k * kOptionsPerBlock + o), price);
      }
    }
  };
  const RegionId outs[] = {prices};
  return detail::guarded_run(mem, kernel, outs, {{"prices", ElementType::F64, {n}}});
}

}  // namespace uvsram
