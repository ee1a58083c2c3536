#ifndef LCS_LORENTZIAN_HPP
#define LCS_LORENTZIAN_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/model.hpp"
#include "lcs/types.hpp"

namespace lcs {

enum class ScaleSource { user, estimated, clean_range };

/// Scale parameter gamma of the Lorentzian cost.
struct LorentzianScale {
  double gamma = 1.0;
  ScaleSource source = ScaleSource::user;

  static LorentzianScale user(double gamma) {
    detail::require(std::isfinite(gamma) && gamma > 0.0,
                    "LorentzianScale: gamma must be positive and finite");
    return {gamma, ScaleSource::user};
  }
};

/// Diagonal of the weight matrix; every entry in (0, 1].
struct WeightVector {
  Vector w;
  Index size() const noexcept { return w.size(); }
};

namespace detail {
inline void require_gamma(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive and finite");
}
}  // namespace detail

/// sum_i log(1 + u_i^2 / gamma^2)
inline double ll2_norm(const Vector& u, double gamma) {
  detail::require_gamma(gamma);
  const double inv = 1.0 / (gamma * gamma);
  double acc = 0.0;
  for (Index i = 0; i < u.size(); ++i) acc += std::log1p(u[i] * u[i] * inv);
  return acc;
}

/// w_i = gamma^2 / (gamma^2 + r_i^2)
inline WeightVector weights(const Vector& residual, double gamma) {
  detail::require_gamma(gamma);
  const double g2 = gamma * gamma;
  WeightVector w{Vector(residual.size())};
  for (Index i = 0; i < residual.size(); ++i)
    w.w[i] = g2 / (g2 + residual[i] * residual[i]);
  return w;
}

/// Phi^T W (y - Phi x). Omits the 2/gamma^2 factor of the true negative
/// gradient of the Lorentzian cost.
template <LinearOperator Op>
Vector negative_gradient(const Op& op, const Vector& y, const Vector& x,
                         double gamma) {
  detail::require(y.size() == op.rows() && x.size() == op.cols(),
                  "negative_gradient: dimension mismatch");
  const Vector r = y - op.apply(x);
  const WeightVector w = weights(r, gamma);
  return op.apply_adjoint(w.w.cwiseProduct(r));
}

/// Linear interpolation at fractional rank q*(m-1) of the ascending order
/// statistics. q = 0 is the minimum, q = 1 the maximum.
inline double quantile(const Vector& v, double q) {
  detail::require(v.size() >= 1, "quantile: empty vector");
  detail::require(q >= 0.0 && q <= 1.0, "quantile: q outside [0, 1]");
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return s[lo];
  return s[lo] + frac * (s[hi] - s[lo]);
}

/// 1e-9 * max(1, max |y_i|); keeps gamma away from zero on constant data.
inline double gamma_floor(const Vector& y) {
  const double peak = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
  return 1e-9 * std::max(1.0, peak);
}

/// Half the 12.5%-87.5% interquantile range of the measurements.
inline LorentzianScale estimate_gamma(const Vector& y) {
  detail::require(y.size() >= 1, "estimate_gamma: empty measurement vector");
  const double g = 0.5 * (quantile(y, 0.875) - quantile(y, 0.125));
  return {std::max(gamma_floor(y), g), ScaleSource::estimated};
}

/// Half the full sample range of clean measurements. Experimental mode; needs
/// the uncorrupted measurements, so only usable in simulations.
inline LorentzianScale clean_range_gamma(const Vector& clean) {
  detail::require(clean.size() >= 1, "clean_range_gamma: empty vector");
  const double g = 0.5 * (clean.maxCoeff() - clean.minCoeff());
  return {std::max(gamma_floor(clean), g), ScaleSource::clean_range};
}

}  // namespace lcs

#endif  // LCS_LORENTZIAN_HPP
