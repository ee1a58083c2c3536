#ifndef LCS_HARNESS_BOUNDS_HPP
#define LCS_HARNESS_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/analysis.hpp"
#include "lcs/error.hpp"
#include "lcs/harness/signal.hpp"
#include "lcs/lorentzian.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"

namespace lcs::harness {

struct BoundSuiteConfig {
  int instances = 200;
  Index n = 14;
  Index m = 12;
  Index s = 2;
  int t_max = 25;
  double cauchy_sigma = 0.01;
  OperatorKind kind = OperatorKind::dense;  // dense: spectral-normalized Gaussian
  std::uint64_t base_seed = 1;
};

struct BoundInstance {
  int index = 0;
  Index k = 0;
  double delta_high = 0.0;
  double delta_low = 0.0;
  bool certified = false;
  int violations = 0;
  double worst_ratio = 0.0;  // max_t error(t) / bound(t), certified instances only
};

struct BoundSuiteResult {
  int instances = 0;
  int certified = 0;
  int skipped = 0;
  int violations = 0;  // instances with at least one violated t
  double min_delta_high = 0.0;
  std::vector<BoundInstance> details;
};

inline void to_json(nlohmann::json& j, const BoundSuiteResult& r) {
  j = {{"instances", r.instances},
       {"certified", r.certified},
       {"skipped", r.skipped},
       {"violations", r.violations},
       {"min_delta_high", r.min_delta_high},
       {"rip_threshold", 1.0 / std::sqrt(32.0)}};
}

/// Checks ||x0 - x(t)|| <= bound(t), t = 0..t_max, for fixed-step LIHT
/// (k = 0) and LIHT with k known support entries (k = 1) on alternating
/// instances. Instances whose exhaustive RIP constant misses the condition
/// are skipped.
inline BoundSuiteResult verify_bounds(const BoundSuiteConfig& cfg) {
  lcs::detail::require(cfg.instances >= 1, "verify-bounds: instances must be >= 1");
  lcs::detail::require(cfg.s >= 1 && 3 * cfg.s <= cfg.n, "verify-bounds: need 3s <= n");
  BoundSuiteResult out;
  out.instances = cfg.instances;
  out.min_delta_high = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.instances; ++i) {
    const auto key = static_cast<std::uint64_t>(i);
    BoundInstance inst;
    inst.index = i;
    inst.k = i % 2;
    const OperatorDescriptor desc{cfg.kind, cfg.m, cfg.n, derive_seed(cfg.base_seed, {key, 2}),
                                  cfg.kind == OperatorKind::dense ? Normalization::spectral
                                                                  : Normalization::none,
                                  true};
    const SensingOperator op = make_operator(desc);
    const RipEstimate high = rip_constant(op, 3 * cfg.s - 2 * inst.k);
    const RipEstimate low = rip_constant(op, 2 * cfg.s - inst.k);
    inst.delta_high = high.delta;
    inst.delta_low = low.delta;
    out.min_delta_high = std::min(out.min_delta_high, high.delta);

    const SparseSignal sig =
        draw_sparse_signal(cfg.n, cfg.s, 1.0, derive_seed(cfg.base_seed, {key, 1}));
    const MeasurementSet ms =
        corrupt(op.apply(sig.x),
                NoiseSpec{Cauchy{cfg.cauchy_sigma}, derive_seed(cfg.base_seed, {key, 3})});
    const LorentzianScale gamma = estimate_gamma(ms.y);
    const double eps = ll2_norm(*ms.noise, gamma.gamma);
    const BoundReport b =
        recovery_error_bound(high, low, gamma.gamma, eps, cfg.m, sig.x.norm(), cfg.t_max);
    inst.certified = b.condition_met;
    if (!inst.certified) {
      ++out.skipped;
      out.details.push_back(inst);
      continue;
    }
    ++out.certified;

    SolverParams p;
    p.s = cfg.s;
    p.gamma = gamma;
    p.step_mode = StepMode::fixed;
    p.mu = 1.0;
    p.tol = 0.0;
    p.max_iters = cfg.t_max;
    p.record_iterates = true;
    const SupportSet t0 = pks_policy(sig.x, sig.support,
                                     static_cast<double>(inst.k) / static_cast<double>(cfg.s),
                                     PksPolicy::largest, derive_seed(cfg.base_seed, {key, 4}));
    const SolveReport rep = inst.k == 0 ? liht(ms.y, op, p) : liht_pks(ms.y, op, p, t0);
    for (std::size_t t = 0; t < rep.iterates.size() && t < b.bound_at_t.size(); ++t) {
      const double err = (sig.x - rep.iterates[t]).norm();
      const double bound = b.bound_at_t[t];
      if (err > bound * (1.0 + 1e-12) + 1e-15) ++inst.violations;
      if (bound > 0.0) inst.worst_ratio = std::max(inst.worst_ratio, err / bound);
    }
    out.violations += inst.violations > 0 ? 1 : 0;
    out.details.push_back(inst);
  }
  return out;
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_BOUNDS_HPP
