#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "uvsram/rng.hpp"
#include "uvsram/workloads/workload.hpp"

namespace uvsram {

/// Strictly diagonally dominant system A x = b, row-major A.
struct JacobiInput {
  std::uint32_t n = 0;
  std::vector<double> a;
  std::vector<double> b;
};

inline JacobiInput make_jacobi_input(const WorkloadConfig& cfg) {
  const std::uint32_t n = cfg.size.jacobi_n;
  Rng rng = Rng::stream(cfg.input_seed, 0x6a61636f6269ULL);
  JacobiInput in{n, std::vector<double>(std::size_t{n} * n), std::vector<double>(n)};
  for (std::uint32_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = 2.0 * rng.uniform() - 1.0;
      in.a[std::size_t{i} * n + j] = v;
      off += std::abs(v);
    }
    in.a[std::size_t{i} * n + i] = 2.0 * off + 1.0 + rng.uniform();
    in.b[i] = 2.0 * rng.uniform() - 1.0;
  }
  return in;
}

/// Jacobi iteration. Stops once the residual of the current iterate is below
/// tolerance (max-norm) or the iteration cap is reached; outputs x.
///
/// Layout: the row-pointer table is the only index region. Each row is
/// reached through its pointer, so a corrupted entry moves the whole row.
inline WorkloadResult run_jacobi(const WorkloadConfig& cfg, SimMemory& mem) {
  const auto in = make_jacobi_input(cfg);
  const std::uint32_t n = in.n;

  const auto rows = mem.add_region("jacobi.rowptr", RegionKind::Index, 8ull * n);
  const auto a = mem.add_region("jacobi.A", RegionKind::Bulk, 8ull * n * n, 1024);
  const auto b = mem.add_region("jacobi.b", RegionKind::Bulk, 8ull * n, 64);
  const auto x = mem.add_region("jacobi.x", RegionKind::Bulk, 8ull * n, 64);
  const auto xn = mem.add_region("jacobi.xnew", RegionKind::Bulk, 8ull * n, 64);

  std::vector<std::uint64_t> ptrs(n);
  for (std::uint32_t i = 0; i < n; ++i) ptrs[i] = mem.region(a).base + 8ull * n * i;
  mem.preload(rows, detail::as_bytes_of(ptrs));
  mem.preload(a, detail::as_bytes_of(in.a));
  mem.preload(b, detail::as_bytes_of(in.b));

  auto kernel = [&] {
    for (std::uint32_t it = 0; it < cfg.size.jacobi_max_iter; ++it) {
      double residual = 0.0;
      for (std::uint32_t i = 0; i < n; ++i) {
        const auto row = mem.load<std::uint64_t>(rows, mem.element<std::uint64_t>(rows, i));
        double sigma = 0.0;
        for (std::uint32_t j = 0; j < n; ++j) {
          if (j == i) continue;
          sigma += mem.load<double>(a, row + 8ull * j) *
                   mem.load<double>(x, mem.element<double>(x, j));
        }
        const double diag = mem.load<double>(a, row + 8ull * i);
        const double bi = mem.load<double>(b, mem.element<double>(b, i));
        const double xi = mem.load<double>(x, mem.element<double>(x, i));
        const double r = std::abs(bi - sigma - diag * xi);
        if (r > residual) residual = r;
        mem.store(xn, mem.element<double>(xn, i), (bi - sigma) / diag);
      }
      if (residual < cfg.size.jacobi_tolerance) break;
      for (std::uint32_t i = 0; i < n; ++i)
        mem.store(x, mem.element<double>(x, i),
                  mem.load<double>(xn, mem.element<double>(xn, i)));
    }
  };
  const RegionId outs[] = {x};
  return detail::guarded_run(mem, kernel, outs, {{"x", ElementType::F64, {n}}});
}

}  // namespace uvsram
