#ifndef LCS_HARNESS_EXPERIMENT_HPP
#define LCS_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "lcs/analysis.hpp"
#include "lcs/harness/config.hpp"
#include "lcs/harness/signal.hpp"
#include "lcs/lorentzian.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"

namespace lcs::harness {

/// Aggregate over the trials of one (sweep value, solver) cell.
struct ReportRow {
  double sweep_value = 0.0;
  std::string solver_id;
  double mean_rsnr = 0.0;
  double median_rsnr = 0.0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;
  double mean_wall_time = 0.0;
  int trials = 0;
};

/// One solver run on one trial.
struct TrialOutcome {
  double rsnr = 0.0;
  bool success = false;
  int iterations = 0;
  double wall_time = 0.0;
  bool diverged = false;
  bool adaptive = false;
  int monotonicity_violations = 0;
  int checked_pairs = 0;
};

struct ExperimentResult {
  std::vector<ReportRow> rows;
  int diverged = 0;
  int adaptive_runs = 0;
  int monotonicity_violations = 0;  // summed over adaptive runs
  long checked_pairs = 0;
};

/// Fatal divergence of a solver marked fatal in the config.
class FatalDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Seed roles inside one trial.
enum class SeedRole : std::uint64_t { signal = 1, op = 2, noise = 3, pks = 4 };

inline std::uint64_t trial_seed(std::uint64_t base, int trial, SeedRole role) {
  return derive_seed(base, {static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(role)});
}

namespace detail {

inline int checked_pairs(const SolveReport& rep) {
  int c = 0;
  for (const auto& s : rep.steps) c += (!s.support_changed && s.backtracks == 0) ? 1 : 0;
  return c;
}

inline NoiseLaw swept_noise(const ExperimentConfig& c, double v) {
  NoiseLaw law = c.noise;
  if (c.sweep.axis == SweepAxis::p) std::get<ContaminatedGaussian>(law).p = v;
  if (c.sweep.axis == SweepAxis::alpha) std::get<AlphaStable>(law).alpha = v;
  return law;
}

inline std::vector<TrialOutcome> run_trial(const ExperimentConfig& c, double sweep_value,
                                           int trial) {
  const Index n = c.signal.n;
  const Index m = c.sweep.axis == SweepAxis::m ? static_cast<Index>(sweep_value) : c.op.m;
  const std::uint64_t op_seed =
      c.op.pin_operator ? derive_seed(c.base_seed, {0xfeedULL})
                        : trial_seed(c.base_seed, trial, SeedRole::op);
  const SensingOperator op = make_operator(
      {c.op.kind, m, n, op_seed, c.op.kind == OperatorKind::dense ? c.op.normalization
                                                                  : Normalization::none,
       c.op.random_signs});
  const double amplitude =
      c.signal.measurement_power && c.signal.s > 0
          ? amplitude_for_power(op, c.signal.s, *c.signal.measurement_power)
          : c.signal.amplitude;
  const SparseSignal sig = draw_sparse_signal(
      n, c.signal.s, amplitude, trial_seed(c.base_seed, trial, SeedRole::signal));
  const Vector clean = op.apply(sig.x);
  const MeasurementSet ms = corrupt(
      clean, NoiseSpec{swept_noise(c, sweep_value), trial_seed(c.base_seed, trial, SeedRole::noise)});
  const double peak = clean.cwiseAbs().maxCoeff();

  std::vector<TrialOutcome> out;
  out.reserve(c.solvers.size());
  for (const SolverConfig& sc : c.solvers) {
    SolverParams p = sc.params;
    if (sc.variant == Variant::ls_iht) p.weight_mode = WeightMode::identity;
    if (sc.gamma_mode == GammaMode::fixed) p.gamma = LorentzianScale::user(sc.gamma);
    if (sc.gamma_mode == GammaMode::clean_range) p.gamma = clean_range_gamma(clean);

    Vector y = ms.y;
    SensingOperator used = op;
    TrialOutcome o;
    try {
      if (sc.preprocess == Preprocess::clip) {
        y = clip_measurements(y, sc.lambda_b * peak);
      } else if (sc.preprocess == Preprocess::reject) {
        auto rej = reject_measurements(y, op, sc.lambda_b * peak);
        y = std::move(rej.y);
        used = std::move(rej.op);
      }
      SolveReport rep;
      switch (sc.variant) {
        case Variant::liht:
        case Variant::ls_iht: rep = liht(y, used, p); break;
        case Variant::liht_pks: {
          const double frac = c.sweep.axis == SweepAxis::known_support_fraction
                                  ? sweep_value
                                  : sc.known_fraction;
          const SupportSet t0 = pks_policy(sig.x, sig.support, frac, sc.policy,
                                           trial_seed(c.base_seed, trial, SeedRole::pks));
          rep = liht_pks(y, used, p, t0);
          break;
        }
        case Variant::model_liht:
          rep = model_liht(y, used, p, BlockSparsityModel{sc.block_size, sc.blocks});
          break;
      }
      o.rsnr = c.signal.s > 0 ? rsnr(sig.x, rep.estimate) : 300.0;
      o.success = c.signal.s > 0 ? exact_recovery(sig.x, rep.estimate, c.success_tol)
                                 : rep.estimate.isZero();
      o.iterations = rep.iterations;
      o.wall_time = rep.wall_time;
      o.adaptive = rep.adaptive;
      if (rep.adaptive) {
        o.monotonicity_violations = monotonicity_violations(rep);
        o.checked_pairs = checked_pairs(rep);
      }
    } catch (const DivergenceError& e) {
      if (sc.fatal)
        throw FatalDivergence("solver '" + sc.id + "' diverged at iteration " +
                              std::to_string(e.iteration()) + ": " + e.what());
      o.diverged = true;
      o.rsnr = 0.0;  // scored as the zero estimate
    } catch (const DegenerateError&) {
      o.diverged = true;
      o.rsnr = 0.0;
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace detail

/// Runs every (sweep value, trial) job, fanning trials out over `threads`
/// workers. Output depends only on the config: each trial derives its own
/// seeds and rows are reduced in a fixed order.
inline ExperimentResult run_experiment(const ExperimentConfig& c, int threads = 1) {
  const std::size_t nv = c.sweep.values.size();
  const std::size_t nt = static_cast<std::size_t>(c.trials);
  const std::size_t jobs = nv * nt;
  std::vector<std::vector<TrialOutcome>> results(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        results[job] = detail::run_trial(c, c.sweep.values[job / nt],
                                         static_cast<int>(job % nt));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult res;
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t s = 0; s < c.solvers.size(); ++s) {
      ReportRow row;
      row.sweep_value = c.sweep.values[v];
      row.solver_id = c.solvers[s].id;
      row.trials = c.trials;
      std::vector<double> r;
      double succ = 0, iters = 0, wall = 0;
      for (std::size_t t = 0; t < nt; ++t) {
        const TrialOutcome& o = results[v * nt + t][s];
        r.push_back(o.rsnr);
        succ += o.success ? 1 : 0;
        iters += o.iterations;
        wall += o.wall_time;
        res.diverged += o.diverged ? 1 : 0;
        if (o.adaptive) {
          ++res.adaptive_runs;
          res.monotonicity_violations += o.monotonicity_violations;
          res.checked_pairs += o.checked_pairs;
        }
      }
      const double k = static_cast<double>(nt);
      row.mean_rsnr = std::accumulate(r.begin(), r.end(), 0.0) / k;
      row.median_rsnr = median(r);
      row.success_rate = succ / k;
      row.mean_iterations = iters / k;
      row.mean_wall_time = wall / k;
      res.rows.push_back(row);
    }
  }
  return res;
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_EXPERIMENT_HPP
