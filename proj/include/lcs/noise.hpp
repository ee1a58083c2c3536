#ifndef LCS_NOISE_HPP
#define LCS_NOISE_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lcs/error.hpp"
#include "lcs/model.hpp"
#include "lcs/rng.hpp"
#include "lcs/types.hpp"

namespace lcs {

/// Symmetric alpha-stable law, zero location, scale sigma (alpha = 2 gives
/// variance 2 sigma^2, alpha = 1 is Cauchy with scale sigma).
struct AlphaStable {
  double alpha = 2.0;
  double sigma = 1.0;
};

/// Gaussian background N(0, sigma2) plus, with probability p per sample, an
/// added gross error of magnitude delta with equiprobable sign.
struct ContaminatedGaussian {
  double sigma2 = 1.0;
  double p = 0.0;
  double delta = 1.0;
};

struct Cauchy {
  double sigma = 1.0;
};

struct NoNoise {};

using NoiseLaw = std::variant<NoNoise, AlphaStable, ContaminatedGaussian, Cauchy>;

struct NoiseSpec {
  NoiseLaw law = NoNoise{};
  std::uint64_t seed = 0;

  void validate() const {
    std::visit(
        [](const auto& l) {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, AlphaStable>) {
            detail::require(l.alpha > 0.0 && l.alpha <= 2.0,
                            "alpha-stable: alpha must be in (0, 2]");
            detail::require(l.sigma > 0.0, "alpha-stable: sigma must be > 0");
          } else if constexpr (std::is_same_v<L, ContaminatedGaussian>) {
            detail::require(l.sigma2 > 0.0, "p-gaussian: sigma2 must be > 0");
            detail::require(l.p >= 0.0 && l.p <= 1.0, "p-gaussian: p must be in [0, 1]");
            detail::require(l.delta > 0.0, "p-gaussian: delta must be > 0");
          } else if constexpr (std::is_same_v<L, Cauchy>) {
            detail::require(l.sigma > 0.0, "cauchy: sigma must be > 0");
          }
        },
        law);
  }
};

namespace detail {

/// Chambers-Mallows-Stuck draw of a standard symmetric alpha-stable variate.
template <class Gen>
double cms_standard(double alpha, Gen& gen) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::uniform_real_distribution<double> uni(-half_pi, half_pi);
  std::exponential_distribution<double> expo(1.0);
  double v = uni(gen);
  while (v == -half_pi) v = uni(gen);
  if (alpha == 1.0) return std::tan(v);
  const double w = expo(gen);
  const double av = alpha * v;
  return std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

}  // namespace detail

/// m i.i.d. draws; deterministic given the spec (including its seed).
inline Vector sample(const NoiseSpec& spec, Index m) {
  detail::require(m >= 1, "noise sample: m must be >= 1");
  spec.validate();
  Rng gen(spec.seed);
  Vector z = Vector::Zero(m);
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, AlphaStable>) {
          for (Index i = 0; i < m; ++i) z[i] = l.sigma * detail::cms_standard(l.alpha, gen);
        } else if constexpr (std::is_same_v<L, Cauchy>) {
          for (Index i = 0; i < m; ++i) z[i] = l.sigma * detail::cms_standard(1.0, gen);
        } else if constexpr (std::is_same_v<L, ContaminatedGaussian>) {
          std::normal_distribution<double> nd(0.0, std::sqrt(l.sigma2));
          std::uniform_real_distribution<double> u(0.0, 1.0);
          for (Index i = 0; i < m; ++i) {
            z[i] = nd(gen);
            // Always consume both uniforms so the stream layout is fixed.
            const double hit = u(gen);
            const double sign = u(gen) < 0.5 ? -1.0 : 1.0;
            if (hit < l.p) z[i] += sign * l.delta;
          }
        }
      },
      spec.law);
  return z;
}

/// y = clean + z with z = sample(spec, m).
inline MeasurementSet corrupt(const Vector& clean, const NoiseSpec& spec) {
  detail::require(clean.size() >= 1, "corrupt: empty measurement vector");
  Vector z = sample(spec, clean.size());
  Vector y = clean + z;
  return {std::move(y), clean, std::move(z)};
}

/// Compact text form: none | cauchy:S | stable:A:S | pgauss:S2:P:D
inline NoiseLaw parse_noise_law(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      double v = std::stod(parts.at(i), &used);
      if (used != parts.at(i).size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw InvalidArgument("noise: cannot parse '" + text + "'");
    }
  };
  if (parts.empty()) throw InvalidArgument("noise: empty specification");
  const std::string& kind = parts[0];
  if (kind == "none" && parts.size() == 1) return NoNoise{};
  if (kind == "cauchy" && parts.size() == 2) return Cauchy{num(1)};
  if (kind == "stable" && parts.size() == 3) return AlphaStable{num(1), num(2)};
  if (kind == "pgauss" && parts.size() == 4)
    return ContaminatedGaussian{num(1), num(2), num(3)};
  throw InvalidArgument("noise: cannot parse '" + text + "'");
}

inline void to_json(nlohmann::json& j, const NoiseLaw& law) {
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, NoNoise>) {
          j = {{"law", "none"}};
        } else if constexpr (std::is_same_v<L, AlphaStable>) {
          j = {{"law", "alpha-stable"}, {"alpha", l.alpha}, {"sigma", l.sigma}};
        } else if constexpr (std::is_same_v<L, ContaminatedGaussian>) {
          j = {{"law", "p-gaussian"}, {"sigma2", l.sigma2}, {"p", l.p}, {"delta", l.delta}};
        } else {
          j = {{"law", "cauchy"}, {"sigma", l.sigma}};
        }
      },
      law);
}

}  // namespace lcs

#endif  // LCS_NOISE_HPP
