#ifndef LCS_THRESHOLDING_HPP
#define LCS_THRESHOLDING_HPP

#include <algorithm>
#include <concepts>
#include <numeric>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/types.hpp"

namespace lcs {

namespace detail {

/// Indices of the k largest |a_i| among `pool` (ties: lowest index first).
/// Expected linear time via nth_element.
inline std::vector<Index> select_largest(const Vector& a, std::vector<Index> pool,
                                         std::size_t k) {
  if (k >= pool.size()) return pool;
  auto before = [&a](Index i, Index j) {
    const double ai = std::abs(a[i]);
    const double aj = std::abs(a[j]);
    return ai > aj || (ai == aj && i < j);
  };
  std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k),
                   pool.end(), before);
  pool.resize(k);
  return pool;
}

}  // namespace detail

/// Keep the s largest-magnitude entries, zero the rest.
inline Vector hard_threshold(const Vector& a, Index s) {
  detail::require(s >= 0 && s <= a.size(), "hard_threshold: need 0 <= s <= n");
  if (s == a.size()) return a;
  std::vector<Index> pool(static_cast<std::size_t>(a.size()));
  std::iota(pool.begin(), pool.end(), Index{0});
  Vector out = Vector::Zero(a.size());
  for (Index i : detail::select_largest(a, std::move(pool), static_cast<std::size_t>(s)))
    out[i] = a[i];
  return out;
}

/// a restricted to T0 plus the s - |T0| largest entries outside T0. Entries in
/// T0 pass through even when zero.
inline Vector hard_threshold_pks(const Vector& a, Index s, const SupportSet& t0) {
  const auto k = static_cast<Index>(t0.size());
  detail::require(t0.bound() <= a.size(), "hard_threshold_pks: T0 index out of range");
  detail::require(s <= a.size(), "hard_threshold_pks: s > n");
  detail::require(k <= s, "hard_threshold_pks: |T0| > s");
  Vector out = Vector::Zero(a.size());
  for (Index i : t0) out[i] = a[i];
  const SupportSet rest = t0.complement(a.size());
  for (Index i : detail::select_largest(a, rest.indices(), static_cast<std::size_t>(s - k)))
    out[i] = a[i];
  return out;
}

/// Best-approximation projector onto a union of subspaces:
/// project(a) lies in the model set and minimizes ||a - project(a)||_2.
template <class M>
concept ModelProjection = requires(const M& m, const Vector& a) {
  { m.project(a) } -> std::convertible_to<Vector>;
};

/// Plain s-sparsity.
struct SparsityModel {
  Index s = 0;
  Vector project(const Vector& a) const { return hard_threshold(a, s); }
};

/// s-sparsity with a preserved known part of the support.
struct KnownSupportModel {
  Index s = 0;
  SupportSet t0;
  Vector project(const Vector& a) const { return hard_threshold_pks(a, s, t0); }
};

/// n split into consecutive blocks of block_size; keeps the blocks_kept
/// blocks with the largest l2 energy (ties: lowest block index).
struct BlockSparsityModel {
  Index block_size = 1;
  Index blocks_kept = 0;

  Vector project(const Vector& a) const {
    detail::require(block_size >= 1, "block model: block_size must be >= 1");
    detail::require(a.size() % block_size == 0,
                    "block model: n must be a multiple of block_size");
    const Index nb = a.size() / block_size;
    detail::require(blocks_kept >= 0 && blocks_kept <= nb,
                    "block model: blocks_kept outside [0, n / block_size]");
    Vector energy(nb);
    for (Index b = 0; b < nb; ++b)
      energy[b] = a.segment(b * block_size, block_size).squaredNorm();
    std::vector<Index> pool(static_cast<std::size_t>(nb));
    std::iota(pool.begin(), pool.end(), Index{0});
    Vector out = Vector::Zero(a.size());
    for (Index b : detail::select_largest(energy, std::move(pool),
                                          static_cast<std::size_t>(blocks_kept)))
      out.segment(b * block_size, block_size) = a.segment(b * block_size, block_size);
    return out;
  }
};

template <ModelProjection M>
Vector project_model(const Vector& a, const M& model) {
  return model.project(a);
}

}  // namespace lcs

#endif  // LCS_THRESHOLDING_HPP
