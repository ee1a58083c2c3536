#ifndef LCS_SOLVERS_HPP
#define LCS_SOLVERS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/lorentzian.hpp"
#include "lcs/model.hpp"
#include "lcs/thresholding.hpp"
#include "lcs/types.hpp"

namespace lcs {

enum class StepMode { fixed, adaptive };
enum class WeightMode { lorentzian, identity };
enum class StopReason { max_iters, converged, stalled };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max-iters";
    case StopReason::converged: return "converged";
    case StopReason::stalled: return "stalled";
  }
  return "?";
}

struct SolverParams {
  Index s = 0;
  std::optional<LorentzianScale> gamma;  // empty: estimate once from y
  StepMode step_mode = StepMode::adaptive;
  double mu = 1.0;  // fixed mode only
  int max_iters = 300;
  double tol = 1e-6;
  int backtrack_max = 30;
  WeightMode weight_mode = WeightMode::lorentzian;
  double step_scale = 1.0;  // multiplies the adaptive step; 1 in normal use
  bool record_iterates = false;
};

/// Per-iteration diagnostics; entry t describes the move x(t) -> x(t+1).
struct IterationRecord {
  double mu = 0.0;
  int backtracks = 0;
  bool support_changed = false;
  bool search_stalled = false;
};

struct SolveReport {
  Vector estimate;
  std::vector<double> objective_trace;  // length iterations + 1
  int iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
  int backtracks = 0;
  int stall_flags = 0;
  int support_changes = 0;
  std::uint64_t support_trace_hash = 0;
  double wall_time = 0.0;
  double gamma = 0.0;  // resolved scale (0 for identity weights)
  bool adaptive = true;
  std::vector<IterationRecord> steps;
  std::vector<Vector> iterates;  // x(0..iterations) when requested
};

/// Iterate, its support, current step, residual and objective.
struct SolverState {
  Vector x;
  SupportSet support;
  Vector residual;
  double objective = 0.0;
  double mu = 0.0;
  int iteration = 0;
};

namespace detail {

inline void validate(const SolverParams& p, Index n) {
  require(p.s >= 0 && p.s <= n, "solver: sparsity s outside [0, n]");
  require(p.max_iters >= 1, "solver: max_iters must be >= 1");
  require(p.tol >= 0.0 && std::isfinite(p.tol), "solver: tol must be >= 0");
  require(p.backtrack_max >= 0, "solver: backtrack_max must be >= 0");
  require(p.step_scale > 0.0 && std::isfinite(p.step_scale),
          "solver: step_scale must be positive");
  if (p.step_mode == StepMode::fixed)
    require(p.mu > 0.0 && std::isfinite(p.mu), "solver: fixed mu must be > 0");
  if (p.gamma) require_gamma(p.gamma->gamma);
}

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
};

}  // namespace detail

/// Step that minimizes ||W^{1/2}(r - mu Phi_S g_S)||^2:
/// ||g_S||^2 / ||W^{1/2} Phi_S g_S||^2. Empty result when g_S = 0
/// (nothing left to do on S). Throws StallError when the denominator
/// vanishes.
template <LinearOperator Op>
std::optional<double> adaptive_step(const Vector& g, const Op& op,
                                    const WeightVector& w, const SupportSet& s) {
  detail::require(g.size() == op.cols() && w.size() == op.rows(),
                  "adaptive_step: dimension mismatch");
  detail::require(!s.empty(), "adaptive_step: empty support");
  const Vector gs = restrict_to(g, s);
  const double num = gs.squaredNorm();
  if (num == 0.0) return std::nullopt;
  const Vector pg = op.apply(gs);
  const double den = pg.cwiseProduct(pg).dot(w.w);
  if (!(den >= 1e-300))
    throw StallError("adaptive_step: gradient lies in the null space of W^{1/2} Phi_S");
  return num / den;
}

struct Candidate {
  Vector x;
  Vector residual;
  double objective = 0.0;
};

struct GuardOutcome {
  Candidate accepted;
  double mu = 0.0;
  int backtracks = 0;
  bool stalled = false;
};

/// Backtracking on support changes: if the candidate leaves the current
/// support and raises the objective, halve mu and rebuild (via `make(mu)`)
/// up to backtrack_max times. If no trial decreases the objective, the best
/// one seen is accepted and the outcome is flagged stalled.
template <class MakeCandidate>
GuardOutcome line_search_guard(const SolverState& state, Candidate candidate,
                               const SolverParams& params, MakeCandidate&& make) {
  GuardOutcome out{std::move(candidate), state.mu, 0, false};
  auto raises = [&](const Candidate& c) {
    return SupportSet::of(c.x) != state.support && c.objective > state.objective;
  };
  if (!raises(out.accepted)) return out;
  Candidate best = out.accepted;
  double best_mu = out.mu;
  double mu = out.mu;
  for (int b = 1; b <= params.backtrack_max; ++b) {
    mu *= 0.5;
    Candidate c = make(mu);
    out.backtracks = b;
    if (!raises(c)) {
      out.accepted = std::move(c);
      out.mu = mu;
      return out;
    }
    if (c.objective < best.objective) {
      best = std::move(c);
      best_mu = mu;
    }
  }
  out.accepted = std::move(best);
  out.mu = best_mu;
  out.stalled = true;
  return out;
}

/// Projected (weighted) gradient iteration x <- P(x + mu Phi^T W (y - Phi x))
/// from x(0) = 0, shared by every solver variant. The projector P is plain
/// hard thresholding, the known-support operator or a structured model.
template <LinearOperator Op, ModelProjection Proj>
SolveReport projected_iteration(const Vector& y, const Op& op,
                                const SolverParams& params, const Proj& proj) {
  const auto t_start = std::chrono::steady_clock::now();
  detail::require(y.size() == op.rows(), "solver: y length must equal op rows");
  detail::require(y.allFinite(), "solver: non-finite measurement");
  const Index n = op.cols();
  detail::validate(params, n);

  const bool lorentz = params.weight_mode == WeightMode::lorentzian;
  const bool adaptive = params.step_mode == StepMode::adaptive;
  double gamma = 0.0;
  if (lorentz) gamma = params.gamma ? params.gamma->gamma : estimate_gamma(y).gamma;

  auto objective = [&](const Vector& r) {
    return lorentz ? ll2_norm(r, gamma) : r.squaredNorm();
  };
  auto weights_of = [&](const Vector& r) {
    return lorentz ? weights(r, gamma) : WeightVector{Vector::Ones(r.size())};
  };

  SolveReport rep;
  rep.gamma = gamma;
  rep.adaptive = adaptive;

  SolverState st;
  st.x = Vector::Zero(n);
  st.residual = y;
  st.objective = objective(st.residual);
  rep.objective_trace.push_back(st.objective);
  if (params.record_iterates) rep.iterates.push_back(st.x);
  detail::Fnv1a hash;
  hash.add(~0ULL);

  auto finish = [&](StopReason why) {
    rep.stop_reason = why;
    rep.estimate = st.x;
    rep.iterations = st.iteration;
    rep.support_trace_hash = hash.h;
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
  };
  auto stay = [&]() {
    // x(t+1) = x(t): record a null move.
    ++st.iteration;
    rep.objective_trace.push_back(st.objective);
    rep.steps.push_back({0.0, 0, false, false});
    if (params.record_iterates) rep.iterates.push_back(st.x);
    for (Index i : st.support) hash.add(static_cast<std::uint64_t>(i));
    hash.add(~0ULL);
  };

  if (params.s == 0) return finish(StopReason::converged);

  auto make = [&](const Vector& g, double mu) {
    Candidate c;
    c.x = proj.project(st.x + mu * g);
    c.residual = y - op.apply(c.x);
    c.objective = objective(c.residual);
    return c;
  };

  while (st.iteration < params.max_iters) {
    const WeightVector w = weights_of(st.residual);
    const Vector g = op.apply_adjoint(w.w.cwiseProduct(st.residual));
    if (!g.allFinite())
      throw DivergenceError("solver: non-finite gradient", st.iteration);
    if (g.squaredNorm() == 0.0) {
      stay();
      return finish(StopReason::converged);
    }

    GuardOutcome step;
    if (adaptive) {
      SupportSet s = st.support;
      std::optional<double> mu;
      try {
        if (!s.empty()) mu = adaptive_step(g, op, w, s);
        if (!mu) {
          // Empty support or zero gradient on it: step on the support the
          // projector picks from the full gradient.
          s = SupportSet::of(proj.project(g));
          if (!s.empty()) mu = adaptive_step(g, op, w, s);
        }
      } catch (const StallError&) {
        return finish(StopReason::stalled);
      }
      if (!mu) {
        stay();
        return finish(StopReason::converged);
      }
      st.mu = *mu * params.step_scale;
      step = line_search_guard(st, make(g, st.mu), params,
                               [&](double m) { return make(g, m); });
    } else {
      st.mu = params.mu;
      step = GuardOutcome{make(g, st.mu), st.mu, 0, false};
    }

    Candidate& c = step.accepted;
    if (!c.x.allFinite() || !std::isfinite(c.objective))
      throw DivergenceError("solver: non-finite iterate at iteration " +
                                std::to_string(st.iteration + 1),
                            st.iteration + 1);

    SupportSet next_support = SupportSet::of(c.x);
    const bool changed = next_support != st.support;
    const double change = (c.x - st.x).norm();
    const double prev_norm = st.x.norm();

    rep.steps.push_back({step.mu, step.backtracks, changed, step.stalled});
    rep.backtracks += step.backtracks;
    rep.stall_flags += step.stalled ? 1 : 0;
    rep.support_changes += changed ? 1 : 0;

    st.x = std::move(c.x);
    st.residual = std::move(c.residual);
    st.objective = c.objective;
    st.support = std::move(next_support);
    ++st.iteration;
    rep.objective_trace.push_back(st.objective);
    if (params.record_iterates) rep.iterates.push_back(st.x);
    for (Index i : st.support) hash.add(static_cast<std::uint64_t>(i));
    hash.add(~0ULL);

    if (change <= params.tol * prev_norm) return finish(StopReason::converged);
  }
  return finish(StopReason::max_iters);
}

/// Lorentzian iterative hard thresholding.
template <LinearOperator Op>
SolveReport liht(const Vector& y, const Op& op, const SolverParams& params) {
  detail::require(params.s >= 0 && params.s <= op.cols(), "liht: s outside [0, n]");
  return projected_iteration(y, op, params, SparsityModel{params.s});
}

/// Least-squares IHT: identical machinery with unit weights; the adaptive
/// step becomes the normalized IHT step.
template <LinearOperator Op>
SolveReport ls_iht(const Vector& y, const Op& op, SolverParams params) {
  params.weight_mode = WeightMode::identity;
  return liht(y, op, params);
}

/// LIHT with a partially known support T0 preserved at every iteration.
template <LinearOperator Op>
SolveReport liht_pks(const Vector& y, const Op& op, const SolverParams& params,
                     const SupportSet& t0) {
  detail::require(static_cast<Index>(t0.size()) <= params.s, "liht_pks: |T0| > s");
  detail::require(t0.bound() <= op.cols(), "liht_pks: T0 index out of range");
  detail::require(params.s <= op.cols(), "liht_pks: s > n");
  return projected_iteration(y, op, params, KnownSupportModel{params.s, t0});
}

/// LIHT with a structured-sparsity projector in place of hard thresholding.
template <LinearOperator Op, ModelProjection M>
SolveReport model_liht(const Vector& y, const Op& op, const SolverParams& params,
                       const M& model) {
  return projected_iteration(y, op, params, model);
}

/// y_i clamped to [-lambda, lambda].
inline Vector clip_measurements(const Vector& y, double lambda) {
  detail::require(lambda > 0.0, "clip_measurements: lambda must be > 0");
  return y.cwiseMax(-lambda).cwiseMin(lambda);
}

struct RejectedMeasurements {
  Vector y;
  SensingOperator op;
  std::vector<Index> kept;
};

/// Drop the measurements with |y_i| >= lambda together with their rows.
inline RejectedMeasurements reject_measurements(const Vector& y,
                                                const SensingOperator& op,
                                                double lambda) {
  detail::require(lambda > 0.0, "reject_measurements: lambda must be > 0");
  detail::require(y.size() == op.rows(), "reject_measurements: dimension mismatch");
  std::vector<Index> kept;
  for (Index i = 0; i < y.size(); ++i)
    if (std::abs(y[i]) < lambda) kept.push_back(i);
  if (kept.empty())
    throw DegenerateError("reject_measurements: every measurement rejected");
  Vector yr(static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) yr[static_cast<Index>(i)] = y[kept[i]];
  return {std::move(yr), op.restrict_rows(kept), std::move(kept)};
}

/// Count of iteration pairs with unchanged support and no backtracking whose
/// objective rose by more than slack * (1 + |objective|). Only meaningful
/// for adaptive-step runs.
inline int monotonicity_violations(const SolveReport& rep, double slack = 1e-10) {
  int bad = 0;
  for (std::size_t t = 0; t < rep.steps.size(); ++t) {
    const auto& st = rep.steps[t];
    if (st.support_changed || st.backtracks > 0) continue;
    const double a = rep.objective_trace[t];
    const double b = rep.objective_trace[t + 1];
    if (b > a + slack * (1.0 + std::abs(a))) ++bad;
  }
  return bad;
}

}  // namespace lcs

#endif  // LCS_SOLVERS_HPP
