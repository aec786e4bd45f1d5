#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uvsram/fault_model.hpp"
#include "uvsram/harness/metrics.hpp"
#include "uvsram/rng.hpp"
#include "uvsram/workloads/registry.hpp"

using namespace uvsram;

namespace uvsram {
inline void PrintTo(Benchmark b, std::ostream* os) { *os << to_string(b); }
}  // namespace uvsram

namespace {

constexpr CacheGeometry kL1{};

WorkloadConfig config(Benchmark b, std::uint64_t seed = 1) {
  WorkloadConfig c;
  c.benchmark = b;
  c.input_seed = seed;
  return c;
}

Output clean_output(const WorkloadConfig& cfg, Routing r = Routing::Cached) {
  auto res = run_workload(cfg, kL1, nullptr, r);
  if (res.crashed()) throw std::runtime_error("fault-free run crashed: " + res.crash().detail);
  return res.output();
}

// Regions as laid out by a fault-free run (layout does not depend on faults).
std::vector<Region> layout_of(const WorkloadConfig& cfg) {
  SimMemory mem(kL1, default_step_budget(cfg));
  run_benchmark(cfg, mem);
  return {mem.regions().begin(), mem.regions().end()};
}

const Region& find_region(const std::vector<Region>& rs, std::string_view name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("no region " + std::string(name));
}

// A fault on bit `bit` of the byte at `addr`, bound in every way of its set
// so it hits whichever frame the line lands in.
FaultMap fault_at(std::uint64_t addr, unsigned bit, CorruptionKind kind) {
  FaultMap m;
  const std::uint64_t line = addr / kL1.line_bytes;
  const std::uint64_t set = line % kL1.num_sets;
  const std::uint64_t bit_in_line = (addr % kL1.line_bytes) * 8 + bit;
  for (std::uint64_t way = 0; way < kL1.associativity; ++way) {
    const std::uint64_t linear = (way * kL1.num_sets + set) * kL1.line_bits() + bit_in_line;
    m.faults.push_back({BitLocation::from_linear(linear, m.geometry), Permanent{}, kind, std::nullopt});
  }
  return m;
}

// Independent straight-line implementations.

std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

double phi(double x) { return 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double bs_oracle(const OptionRecord& o) {
  const double st = o.volatility * std::sqrt(o.years);
  const double d1 = (std::log(o.spot / o.strike) + (o.rate + o.volatility * o.volatility / 2) * o.years) / st;
  const double d2 = d1 - st;
  const double k = o.strike * std::exp(-o.rate * o.years);
  const double call = o.spot * phi(d1) - k * phi(d2);
  return o.put != 0.0 ? call - o.spot + k : call;  // put-call parity
}

std::vector<std::uint8_t> sobel_oracle(const std::vector<std::uint8_t>& img, int side) {
  std::vector<std::uint8_t> out(img.size());
  auto px = [&](int y, int x) {
    return int(img[std::clamp(y, 0, side - 1) * side + std::clamp(x, 0, side - 1)]);
  };
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const int gx = px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1) - px(y - 1, x - 1) -
                     2 * px(y, x - 1) - px(y + 1, x - 1);
      const int gy = px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1) - px(y - 1, x - 1) -
                     2 * px(y - 1, x) - px(y - 1, x + 1);
      out[y * side + x] = std::uint8_t(std::min<long>(255, std::lround(std::hypot(gx, gy))));
    }
  return out;
}

// 2D DCT round trip evaluated directly from the cosine formula.
std::vector<std::uint8_t> dct_oracle(const std::vector<std::uint8_t>& img, int side) {
  auto a = [](int u) { return u == 0 ? std::sqrt(0.125) : 0.5; };
  auto cs = [](int x, int u) { return std::cos((2 * x + 1) * u * std::numbers::pi / 16); };
  std::vector<std::uint8_t> out(img.size());
  for (int by = 0; by < side; by += 8)
    for (int bx = 0; bx < side; bx += 8) {
      double coef[8][8];
      for (int v = 0; v < 8; ++v)
        for (int u = 0; u < 8; ++u) {
          double s = 0;
          for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
              s += (img[(by + y) * side + bx + x] - 128.0) * cs(x, u) * cs(y, v);
          coef[v][u] = std::round(a(u) * a(v) * s);
        }
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          double s = 0;
          for (int v = 0; v < 8; ++v)
            for (int u = 0; u < 8; ++u) s += a(u) * a(v) * coef[v][u] * cs(x, u) * cs(y, v);
          out[(by + y) * side + bx + x] = std::uint8_t(std::clamp(std::lround(s + 128), 0L, 255L));
        }
    }
  return out;
}

std::vector<double> mc_oracle(const WorkloadConfig& cfg) {
  const auto in = make_mc_input(cfg);
  std::vector<double> est(cfg.size.mc_points);
  for (std::size_t i = 0; i < est.size(); ++i) {
    std::uint64_t s = in.rng[i];
    double sum = 0;
    for (std::uint32_t w = 0; w < cfg.size.mc_walks; ++w) {
      double x = in.points[2 * i], y = in.points[2 * i + 1];
      for (std::uint32_t step = 0; step < cfg.size.mc_walk_step_cap; ++step) {
        const double d = std::min({x, 1 - x, y, 1 - y});
        if (d < kWalkEpsilon) break;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        const double ang = 2 * std::numbers::pi * double((s * 0x2545f4914f6cdd1dULL) >> 11) * 0x1.0p-53;
        x += d * std::cos(ang);
        y += d * std::sin(ang);
      }
      x = std::clamp(x, 0.0, 1.0);
      y = std::clamp(y, 0.0, 1.0);
      sum += x * x - y * y + 1;
    }
    est[i] = sum / cfg.size.mc_walks;
  }
  return est;
}

struct Lloyd {
  std::vector<std::int32_t> labels;
  std::vector<double> centroids;
};

Lloyd kmeans_oracle(const WorkloadConfig& cfg) {
  const auto pts = make_kmeans_input(cfg);
  const std::size_t n = cfg.size.kmeans_points, k = cfg.size.kmeans_k;
  Lloyd r{std::vector<std::int32_t>(n, -1), std::vector<double>(2 * k)};
  for (std::size_t c = 0; c < k; ++c) {
    r.centroids[2 * c] = pts[2 * (c * (n / k))];
    r.centroids[2 * c + 1] = pts[2 * (c * (n / k)) + 1];
  }
  for (std::uint32_t it = 0; it < cfg.size.kmeans_max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t best = 0;
      double bd = INFINITY;
      for (std::size_t c = 0; c < k; ++c) {
        const double dx = pts[2 * i] - r.centroids[2 * c], dy = pts[2 * i + 1] - r.centroids[2 * c + 1];
        if (dx * dx + dy * dy < bd) {
          bd = dx * dx + dy * dy;
          best = std::int32_t(c);
        }
      }
      changed |= r.labels[i] != best;
      r.labels[i] = best;
    }
    if (!changed) break;
    std::vector<double> sx(k, 0), sy(k, 0);
    std::vector<std::uint64_t> cnt(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sx[r.labels[i]] += pts[2 * i];
      sy[r.labels[i]] += pts[2 * i + 1];
      ++cnt[r.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (cnt[c]) {
        r.centroids[2 * c] = sx[c] / double(cnt[c]);
        r.centroids[2 * c + 1] = sy[c] / double(cnt[c]);
      }
  }
  return r;
}

}  // namespace

class AllBenchmarks : public ::testing::TestWithParam<Benchmark> {};

TEST_P(AllBenchmarks, FaultFreeCachedEqualsFlat) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto cfg = config(GetParam(), seed);
    const auto cached = clean_output(cfg, Routing::Cached);
    const auto flat = clean_output(cfg, Routing::Flat);
    EXPECT_EQ(cached.fields, flat.fields);
    EXPECT_EQ(cached.bytes, flat.bytes);
    const FaultMap empty;
    auto with_empty = run_workload(cfg, kL1, &empty);
    ASSERT_FALSE(with_empty.crashed());
    EXPECT_EQ(with_empty.output().bytes, cached.bytes);
  }
}

TEST_P(AllBenchmarks, Deterministic) {
  const auto cfg = config(GetParam(), 5);
  const auto map = generate_random_map(40, SramGeometry{}, 12);
  const auto a = run_workload(cfg, kL1, &map);
  const auto b = run_workload(cfg, kL1, &map);
  ASSERT_EQ(a.crashed(), b.crashed());
  if (a.crashed()) EXPECT_EQ(a.crash().reason, b.crash().reason);
  else EXPECT_EQ(a.output().bytes, b.output().bytes);
}

TEST_P(AllBenchmarks, IndexRegionsLieBelowBulkData) {
  const auto rs = layout_of(config(GetParam()));
  std::uint64_t index_top = 0, bulk_bottom = UINT64_MAX;
  int n_index = 0;
  for (const auto& r : rs) {
    if (r.kind == RegionKind::Index) {
      index_top = std::max(index_top, r.limit);
      ++n_index;
    } else {
      bulk_bottom = std::min(bulk_bottom, r.base);
    }
  }
  EXPECT_GE(n_index, 1);
  EXPECT_LE(index_top, bulk_bottom);
}

TEST_P(AllBenchmarks, StuckAtZeroOnNeverSetBitsIsMasked) {
  // A stuck-at-0 fault on a bit that never holds a 1 in the fault-free run
  // cannot change anything.
  const auto cfg = config(GetParam());
  const auto golden = clean_output(cfg);
  SimMemory probe(kL1, default_step_budget(cfg));
  probe.cache()->enable_census();
  run_benchmark(cfg, probe);
  std::vector<std::uint64_t> zero_bits;
  for (std::uint32_t set = 0; set < kL1.num_sets; ++set)
    for (std::uint32_t way = 0; way < kL1.associativity; ++way) {
      const auto c = probe.cache()->census(set, way);
      for (std::uint32_t bit = 0; bit < kL1.line_bits(); ++bit)
        if (!(c[bit / 8] >> (bit % 8) & 1))
          zero_bits.push_back((std::uint64_t{way} * kL1.num_sets + set) * kL1.line_bits() + bit);
    }
  ASSERT_FALSE(zero_bits.empty());
  Rng rng(3);
  FaultMap map;
  for (int i = 0; i < 64; ++i) {
    const auto idx = zero_bits[rng.below(zero_bits.size())];
    const auto loc = BitLocation::from_linear(idx, map.geometry);
    if (std::none_of(map.faults.begin(), map.faults.end(), [&](auto& f) { return f.location == loc; }))
      map.faults.push_back({loc, Permanent{}, CorruptionKind::StuckAt0, std::nullopt});
  }
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_FALSE(res.crashed());
  EXPECT_EQ(res.output().bytes, golden.bytes);
}

INSTANTIATE_TEST_SUITE_P(Workloads, AllBenchmarks, ::testing::ValuesIn(kAllBenchmarks),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Jacobi, SolvesTheSystem) {
  for (std::uint64_t seed : {1, 7}) {
    const auto cfg = config(Benchmark::Jacobi, seed);
    const auto in = make_jacobi_input(cfg);
    const auto x = clean_output(cfg).field_values<double>(0);
    const std::size_t n = in.n;
    double residual = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = -in.b[i];
      for (std::size_t j = 0; j < n; ++j) s += in.a[i * n + j] * x[j];
      residual = std::max(residual, std::abs(s));
    }
    EXPECT_LT(residual, cfg.size.jacobi_tolerance);
    const auto ref = gauss_solve(in.a, in.b, n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-6);
  }
}

TEST(Blackscholes, MatchesClosedForm) {
  const auto cfg = config(Benchmark::Blackscholes);
  const auto opts = make_blackscholes_input(cfg);
  const auto prices = clean_output(cfg).field_values<double>(0);
  ASSERT_EQ(prices.size(), opts.size());
  for (std::size_t i = 0; i < opts.size(); ++i)
    EXPECT_NEAR(prices[i], bs_oracle(opts[i]), 1e-9 * std::max(1.0, std::abs(prices[i])));
}

TEST(Dct, RoundTripIsNearLosslessAndMatchesDirectFormula) {
  const auto cfg = config(Benchmark::Dct);
  const int side = int(cfg.size.image_side);
  const auto src = make_test_image(side, cfg.input_seed);
  const auto out = clean_output(cfg).field_values<std::uint8_t>(0);
  EXPECT_GE(psnr(src, out), 40.0);
  const auto ref = dct_oracle(src, side);
  std::size_t off_by_one = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ASSERT_LE(std::abs(int(out[i]) - int(ref[i])), 1) << "pixel " << i;
    off_by_one += out[i] != ref[i];
  }
  // Summation order differs, so only rounding ties may disagree.
  EXPECT_LT(off_by_one, ref.size() / 100);
}

TEST(Sobel, MatchesDirectConvolution) {
  for (std::uint64_t seed : {1, 2}) {
    const auto cfg = config(Benchmark::Sobel, seed);
    const int side = int(cfg.size.image_side);
    EXPECT_EQ(clean_output(cfg).field_values<std::uint8_t>(0),
              sobel_oracle(make_test_image(side, seed), side));
  }
}

TEST(Sobel, OneCorruptedByteStaysWithinTheStencilFootprint) {
  // Sets 8..15 hold only image and output lines (the row-pointer table sits
  // in sets 0..7), so a one-shot flip there corrupts one pixel or one output.
  const auto cfg = config(Benchmark::Sobel);
  const auto golden = clean_output(cfg).bytes;
  Rng rng(17);
  int changed_runs = 0;
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t set = 8 + rng.below(8), way = rng.below(2), bit = rng.below(512);
    FaultMap m;
    const auto linear = (way * kL1.num_sets + set) * kL1.line_bits() + bit;
    m.faults.push_back({BitLocation::from_linear(linear, m.geometry), Transient{rng.below(150000)},
                        CorruptionKind::BitFlip, std::nullopt});
    const auto res = run_workload(cfg, kL1, &m);
    ASSERT_FALSE(res.crashed());
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < golden.size(); ++i) diffs += res.output().bytes[i] != golden[i];
    EXPECT_LE(diffs, 9u);
    changed_runs += diffs > 0;
  }
  EXPECT_GT(changed_runs, 0);
}

TEST(MonteCarlo, MatchesReferenceWalkAndExactSolution) {
  const auto cfg = config(Benchmark::MonteCarlo);
  const auto est = clean_output(cfg).field_values<double>(0);
  EXPECT_EQ(est, mc_oracle(cfg));
  const auto in = make_mc_input(cfg);
  double mean_err = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double x = in.points[2 * i], y = in.points[2 * i + 1];
    const double exact = x * x - y * y + 1;
    EXPECT_NEAR(est[i], exact, 0.25);
    mean_err += std::abs(est[i] - exact) / est.size();
  }
  EXPECT_LT(mean_err, 0.05);
}

TEST(KMeans, MatchesIndependentLloyd) {
  for (std::uint64_t seed : {1, 4}) {
    const auto cfg = config(Benchmark::KMeans, seed);
    const auto out = clean_output(cfg);
    const auto ref = kmeans_oracle(cfg);
    EXPECT_EQ(out.field_values<std::int32_t>(0), ref.labels);
    EXPECT_EQ(out.field_values<double>(1), ref.centroids);
  }
}

TEST(Crashes, CorruptedRowPointerIsOutOfRange) {
  const auto cfg = config(Benchmark::Jacobi);
  const auto& rows = find_region(layout_of(cfg), "jacobi.rowptr");
  const auto map = fault_at(rows.base + 7, 6, CorruptionKind::StuckAt1);  // bit 62 of row 0
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_TRUE(res.crashed());
  EXPECT_EQ(res.crash().reason, CrashReason::OutOfRange);
}

TEST(Crashes, CorruptedOptionBlockPointerIsOutOfRange) {
  const auto cfg = config(Benchmark::Blackscholes);
  const auto& t = find_region(layout_of(cfg), "bs.blocks");
  const auto map = fault_at(t.base + 7, 6, CorruptionKind::StuckAt1);
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_TRUE(res.crashed());
  EXPECT_EQ(res.crash().reason, CrashReason::OutOfRange);
}

TEST(Crashes, CorruptedWalkCountExhaustsStepBudget) {
  const auto cfg = config(Benchmark::MonteCarlo);
  const auto& hdr = find_region(layout_of(cfg), "mc.header");
  const auto map = fault_at(hdr.base + 8 * kMcWalks + 5, 0, CorruptionKind::StuckAt1);  // bit 40
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_TRUE(res.crashed());
  EXPECT_EQ(res.crash().reason, CrashReason::StepBudgetExceeded);
}

TEST(Crashes, LabelBeyondKIsOutOfRange) {
  const auto cfg = config(Benchmark::KMeans);
  const auto& asg = find_region(layout_of(cfg), "kmeans.assign");
  const auto map = fault_at(asg.base, 4, CorruptionKind::StuckAt1);  // label 0 |= 16
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_TRUE(res.crashed());
  EXPECT_EQ(res.crash().reason, CrashReason::OutOfRange);
}

TEST(Crashes, NonFiniteWalkStartIsReported) {
  const auto cfg = config(Benchmark::MonteCarlo);
  const auto& pts = find_region(layout_of(cfg), "mc.points");
  // Point 3's x: sign and exponent all ones make it NaN. Offset 48 keeps
  // clear of the header words that share the set.
  FaultMap map;
  for (std::uint64_t byte : {54, 55})
    for (unsigned bit = 0; bit < 8; ++bit) {
      auto m = fault_at(pts.base + byte, bit, CorruptionKind::StuckAt1);
      map.faults.insert(map.faults.end(), m.faults.begin(), m.faults.end());
    }
  const auto res = run_workload(cfg, kL1, &map);
  ASSERT_TRUE(res.crashed());
  EXPECT_EQ(res.crash().reason, CrashReason::NonFiniteControl);
}

TEST(StepBudget, DefaultsCoverFaultFreeRuns) {
  for (auto b : kAllBenchmarks) {
    const auto cfg = config(b);
    SimMemory mem(kL1, default_step_budget(cfg));
    ASSERT_FALSE(run_benchmark(cfg, mem).crashed()) << to_string(b);
    EXPECT_LE(2 * mem.steps(), default_step_budget(cfg)) << to_string(b);
  }
}
