#ifndef LCS_HARNESS_SIGNAL_HPP
#define LCS_HARNESS_SIGNAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/model.hpp"
#include "lcs/rng.hpp"
#include "lcs/types.hpp"

namespace lcs::harness {

struct SparseSignal {
  Vector x;
  SupportSet support;
};

/// Uniformly random support of size s; every nonzero is +-amplitude with
/// equiprobable sign.
inline SparseSignal draw_sparse_signal(Index n, Index s, double amplitude,
                                       std::uint64_t seed) {
  lcs::detail::require(n >= 1 && s >= 0 && s <= n, "signal: need 0 <= s <= n");
  Rng rng(seed);
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  SparseSignal sig{Vector::Zero(n),
                   SupportSet(std::vector<Index>(pool.begin(), pool.begin() + s))};
  std::bernoulli_distribution coin(0.5);
  for (Index i : sig.support) sig.x[i] = coin(rng) ? amplitude : -amplitude;
  return sig;
}

/// Amplitude a such that E[(Phi x0)_i^2] = power for an s-sparse +-a signal.
inline double amplitude_for_power(const SensingOperator& op, Index s, double power) {
  lcs::detail::require(s >= 1 && power > 0.0, "amplitude_for_power: need s >= 1, power > 0");
  const double per_entry = op.frobenius_sq() /
                           (static_cast<double>(op.rows()) * static_cast<double>(op.cols()));
  return std::sqrt(power / (static_cast<double>(s) * per_entry));
}

enum class PksPolicy { largest, smallest, first_band };

inline PksPolicy parse_pks_policy(const std::string& s) {
  if (s == "largest") return PksPolicy::largest;
  if (s == "smallest") return PksPolicy::smallest;
  if (s == "first-band") return PksPolicy::first_band;
  throw InvalidArgument("unknown known-support policy '" + s + "'");
}

inline const char* to_string(PksPolicy p) {
  switch (p) {
    case PksPolicy::largest: return "largest";
    case PksPolicy::smallest: return "smallest";
    case PksPolicy::first_band: return "first-band";
  }
  return "?";
}

/// floor(fraction |T|) indices of the true support T: largest or smallest
/// magnitudes (magnitude ties ordered by a seeded shuffle) or the lowest
/// indices.
inline SupportSet pks_policy(const Vector& x0, const SupportSet& support,
                             double fraction, PksPolicy policy, std::uint64_t seed) {
  lcs::detail::require(fraction >= 0.0 && fraction <= 1.0,
                  "pks_policy: fraction must be in [0, 1]");
  const auto count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(support.size()) + 1e-9));
  std::vector<Index> idx = support.indices();
  if (policy == PksPolicy::first_band) {
    idx.resize(count);
    return SupportSet(std::move(idx));
  }
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const bool big = policy == PksPolicy::largest;
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const double ma = std::abs(x0[a]);
    const double mb = std::abs(x0[b]);
    return big ? ma > mb : ma < mb;
  });
  idx.resize(count);
  return SupportSet(std::move(idx));
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_SIGNAL_HPP
