#ifndef LCS_HARNESS_TIMING_HPP
#define LCS_HARNESS_TIMING_HPP

#include <cstdint>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/harness/experiment.hpp"
#include "lcs/harness/signal.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"

namespace lcs::harness {

struct TimingConfig {
  std::vector<Index> sizes = {128, 256, 512, 1024, 2048};
  Index s = 8;
  double cauchy_sigma = 0.1;
  int repeats = 7;
  int fixed_iters = 300;  // iterations per timed run of the per-iteration cost
  std::uint64_t base_seed = 1;
};

struct TimingRow {
  Index n = 0;
  Index m = 0;
  double per_iteration = 0.0;  // median seconds per iteration over repeats
  double total = 0.0;          // median seconds of a default-parameter solve
  double mean_iterations = 0.0;
  double ratio = 0.0;          // per_iteration / previous row's (0 for the first)
};

/// Per-iteration and total LIHT time for dense unit-column Gaussian
/// operators with m = n/2 and Cauchy noise. The per-iteration cost comes
/// from runs with a fixed iteration count (tol = 0) so that early
/// convergence does not mix iteration counts into the figure.
inline std::vector<TimingRow> bench_timing(const TimingConfig& cfg) {
  lcs::detail::require(cfg.repeats >= 1 && cfg.fixed_iters >= 1, "bench-timing: bad repeat counts");
  std::vector<TimingRow> rows;
  for (Index n : cfg.sizes) {
    lcs::detail::require(n >= 2 && cfg.s <= n / 2, "bench-timing: size too small for s");
    TimingRow row;
    row.n = n;
    row.m = n / 2;
    std::vector<double> per, total;
    double iters = 0;
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto key = static_cast<std::uint64_t>(n) * 1000 + static_cast<std::uint64_t>(r);
      const SensingOperator op = gaussian_ensemble(row.m, n, derive_seed(cfg.base_seed, {key, 2}),
                                                   Normalization::unit_columns);
      const SparseSignal sig =
          draw_sparse_signal(n, cfg.s, 1.0, derive_seed(cfg.base_seed, {key, 1}));
      const Vector y = corrupt(op.apply(sig.x),
                               NoiseSpec{Cauchy{cfg.cauchy_sigma},
                                         derive_seed(cfg.base_seed, {key, 3})})
                           .y;
      SolverParams p;
      p.s = cfg.s;
      const SolveReport full = liht(y, op, p);
      total.push_back(full.wall_time);
      iters += full.iterations;

      p.tol = 0.0;
      p.max_iters = cfg.fixed_iters;
      const SolveReport fixed = liht(y, op, p);
      per.push_back(fixed.wall_time / std::max(1, fixed.iterations));
    }
    row.per_iteration = median(per);
    row.total = median(total);
    row.mean_iterations = iters / cfg.repeats;
    row.ratio = rows.empty() ? 0.0 : row.per_iteration / rows.back().per_iteration;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_TIMING_HPP
