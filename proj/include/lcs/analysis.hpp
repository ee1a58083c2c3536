#ifndef LCS_ANALYSIS_HPP
#define LCS_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <json.hpp>

#include "lcs/error.hpp"
#include "lcs/model.hpp"
#include "lcs/rng.hpp"
#include "lcs/thresholding.hpp"
#include "lcs/types.hpp"

namespace lcs {

/// Reconstruction SNR in dB, 20 log10(||x0|| / ||x0 - xhat||), capped at 300.
inline double rsnr(const Vector& x0, const Vector& xhat) {
  detail::require(x0.size() == xhat.size(), "rsnr: length mismatch");
  const double sig = x0.norm();
  detail::require(sig > 0.0, "rsnr: x0 must be nonzero");
  const double err = (x0 - xhat).norm();
  if (err == 0.0) return 300.0;
  return std::min(300.0, 20.0 * std::log10(sig / err));
}

/// ||x0 - xhat|| <= tol ||x0||.
inline bool exact_recovery(const Vector& x0, const Vector& xhat, double tol = 1e-4) {
  detail::require(x0.size() == xhat.size(), "exact_recovery: length mismatch");
  return (x0 - xhat).norm() <= tol * x0.norm();
}

/// C(n, k) in floating point (large values are only compared against limits).
inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (Index i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

namespace detail {

/// Visits every size-k subset of [0, n) in lexicographic order.
template <class F>
void for_each_subset(Index n, Index k, F&& f) {
  std::vector<Index> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), Index{0});
  if (k == 0) {
    f(c);
    return;
  }
  while (true) {
    f(c);
    Index i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline double isometry_defect(const Matrix& gram, const std::vector<Index>& s) {
  const auto k = static_cast<Index>(s.size());
  Matrix sub(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      sub(a, b) = gram(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(1.0 - ev[0], ev[k - 1] - 1.0);
}

}  // namespace detail

enum class RipMethod { exhaustive, sampled };

NLOHMANN_JSON_SERIALIZE_ENUM(RipMethod, {{RipMethod::exhaustive, "exhaustive"},
                                         {RipMethod::sampled, "sampled"}})

/// Restricted isometry constant of order s. Sampled estimates are lower
/// bounds on the true constant.
struct RipEstimate {
  Index s = 0;
  double delta = 0.0;
  RipMethod method = RipMethod::exhaustive;
  std::uint64_t supports_checked = 0;
};

inline void to_json(nlohmann::json& j, const RipEstimate& r) {
  j = {{"s", r.s},
       {"delta", r.delta},
       {"method", r.method},
       {"supports_checked", r.supports_checked},
       {"lower_bound_only", r.method == RipMethod::sampled}};
}

inline constexpr double kExhaustiveRipLimit = 1e6;

/// max over supports S of size s of max(1 - lambda_min, lambda_max - 1) of
/// Phi_S^T Phi_S; exhaustive over all C(n, s) supports or over `samples`
/// seeded random supports.
template <LinearOperator Op>
RipEstimate rip_constant(const Op& op, Index s, RipMethod method = RipMethod::exhaustive,
                         std::uint64_t samples = 1000, std::uint64_t seed = 0) {
  const Index n = op.cols();
  detail::require(s >= 0 && s <= n, "rip_constant: order outside [0, n]");
  RipEstimate est{s, 0.0, method, 0};
  if (s == 0) return est;
  Matrix a;
  if constexpr (requires { op.materialize(); }) {
    a = op.materialize();
  } else {
    a.resize(op.rows(), n);
    Vector e = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      a.col(j) = op.apply(e);
      e[j] = 0.0;
    }
  }
  const Matrix gram = a.transpose() * a;
  if (method == RipMethod::exhaustive) {
    detail::require(binomial(n, s) <= kExhaustiveRipLimit,
                    "rip_constant: C(n, s) exceeds the exhaustive limit");
    detail::for_each_subset(n, s, [&](const std::vector<Index>& c) {
      est.delta = std::max(est.delta, detail::isometry_defect(gram, c));
      ++est.supports_checked;
    });
    return est;
  }
  Rng rng(seed);
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < s; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<Index> c(pool.begin(), pool.begin() + s);
    std::sort(c.begin(), c.end());
    est.delta = std::max(est.delta, detail::isometry_defect(gram, c));
    ++est.supports_checked;
  }
  return est;
}

/// Error bound sequence for the thresholding iteration with a partially
/// known support of size k (k = 0: no prior support):
/// bound(t) = alpha^t ||x0|| + beta(t) gamma sqrt(m (e^eps - 1)),
/// alpha = sqrt(8) delta_{3s-2k}, beta(t) = sqrt(1 + delta_{2s-k}) (1 - alpha^t) / (1 - alpha).
struct BoundReport {
  Index s = 0;
  Index k = 0;
  double delta_high = 0.0;  // order 3s - 2k
  double delta_low = 0.0;   // order 2s - k
  double alpha = 0.0;
  double epsilon = 0.0;
  double noise_radius = 0.0;  // gamma sqrt(m (e^eps - 1)) >= ||z||_2
  std::vector<double> beta;        // beta(t), t = 0..t_max
  std::vector<double> bound_at_t;  // t = 0..t_max
  bool condition_met = false;      // delta_high < 1/sqrt(32)
};

inline void to_json(nlohmann::json& j, const BoundReport& b) {
  j = {{"s", b.s},
       {"k", b.k},
       {"delta_high", b.delta_high},
       {"delta_low", b.delta_low},
       {"alpha", b.alpha},
       {"epsilon", b.epsilon},
       {"noise_radius", b.noise_radius},
       {"beta", b.beta},
       {"bound_at_t", b.bound_at_t},
       {"condition_met", b.condition_met}};
}

inline double noise_radius(double gamma, double epsilon, Index m) {
  return gamma * std::sqrt(static_cast<double>(m) * std::expm1(epsilon));
}

inline BoundReport recovery_error_bound(const RipEstimate& high, const RipEstimate& low,
                                        double gamma, double epsilon, Index m,
                                        double norm_x0, int t_max) {
  detail::require(gamma > 0.0, "recovery_error_bound: gamma must be > 0");
  detail::require(epsilon >= 0.0, "recovery_error_bound: epsilon must be >= 0");
  detail::require(t_max >= 0, "recovery_error_bound: t_max must be >= 0");
  // high = 3s - 2k and low = 2s - k determine (s, k).
  const Index s = 2 * low.s - high.s;
  const Index k = s - (high.s - low.s);
  detail::require(s >= 1 && k >= 0 && k <= s,
                  "recovery_error_bound: RIP orders are not (3s-2k, 2s-k)");
  BoundReport b;
  b.s = s;
  b.k = k;
  b.delta_high = high.delta;
  b.delta_low = low.delta;
  b.alpha = std::sqrt(8.0) * high.delta;
  b.epsilon = epsilon;
  b.noise_radius = noise_radius(gamma, epsilon, m);
  b.condition_met = high.delta < 1.0 / std::sqrt(32.0);
  const double eta = std::sqrt(1.0 + low.delta);
  for (int t = 0; t <= t_max; ++t) {
    const double at = std::pow(b.alpha, t);
    const double beta = b.alpha == 1.0 ? eta * t : eta * (1.0 - at) / (1.0 - b.alpha);
    b.beta.push_back(beta);
    b.bound_at_t.push_back(at * norm_x0 + beta * b.noise_radius);
  }
  return b;
}

/// Extension to compressible x0: adds eta (||x0 - x_s||_2 + ||x0 - x_s||_1 / sqrt(s))
/// with eta = sqrt(1 + delta_s) and x_s the best s-term approximation.
inline double compressible_error_bound(const RipEstimate& d3s, const RipEstimate& d2s,
                                       const RipEstimate& ds, double gamma,
                                       double epsilon, Index m, const Vector& x0,
                                       Index s, int t) {
  detail::require(d3s.s == 3 * s && d2s.s == 2 * s && ds.s == s,
                  "compressible_error_bound: RIP orders must be 3s, 2s, s");
  const BoundReport base =
      recovery_error_bound(d3s, d2s, gamma, epsilon, m, x0.norm(), t);
  const Vector tail = x0 - hard_threshold(x0, s);
  const double eta = std::sqrt(1.0 + ds.delta);
  return eta * (tail.norm() + tail.lpNorm<1>() / std::sqrt(static_cast<double>(s))) +
         base.bound_at_t.back();
}

inline constexpr double kOracleSupportLimit = 1e5;

/// Exhaustive sparse least squares: the best fit over every size-s support.
template <LinearOperator Op>
Vector oracle_recover(const Vector& y, const Op& op, Index s) {
  const Index n = op.cols();
  detail::require(y.size() == op.rows(), "oracle_recover: dimension mismatch");
  detail::require(s >= 0 && s <= n, "oracle_recover: s outside [0, n]");
  detail::require(binomial(n, s) <= kOracleSupportLimit,
                  "oracle_recover: C(n, s) exceeds the exhaustive limit");
  Vector best = Vector::Zero(n);
  if (s == 0) return best;
  Matrix a;
  if constexpr (requires { op.materialize(); }) {
    a = op.materialize();
  } else {
    a.resize(op.rows(), n);
    Vector e = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      a.col(j) = op.apply(e);
      e[j] = 0.0;
    }
  }
  double best_res = std::numeric_limits<double>::infinity();
  detail::for_each_subset(n, s, [&](const std::vector<Index>& c) {
    Matrix sub(a.rows(), s);
    for (Index j = 0; j < s; ++j) sub.col(j) = a.col(c[static_cast<std::size_t>(j)]);
    const Vector coef = sub.colPivHouseholderQr().solve(y);
    const double res = (y - sub * coef).squaredNorm();
    if (res < best_res) {
      best_res = res;
      best.setZero();
      for (Index j = 0; j < s; ++j) best[c[static_cast<std::size_t>(j)]] = coef[j];
    }
  });
  return best;
}

}  // namespace lcs

#endif  // LCS_ANALYSIS_HPP
