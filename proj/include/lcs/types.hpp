#ifndef LCS_TYPES_HPP
#define LCS_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "lcs/error.hpp"

namespace lcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free set of coordinate indices.
class SupportSet {
 public:
  SupportSet() = default;

  /// Sorts and deduplicates; rejects negative indices.
  explicit SupportSet(std::vector<Index> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    detail::require(idx_.empty() || idx_.front() >= 0,
                    "SupportSet: negative index");
  }
  SupportSet(std::initializer_list<Index> il)
      : SupportSet(std::vector<Index>(il)) {}

  /// All i in [0, n).
  static SupportSet full(Index n) {
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return SupportSet(std::move(v));
  }

  /// Nonzero pattern of a vector.
  static SupportSet of(const Vector& x) {
    std::vector<Index> v;
    for (Index i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) v.push_back(i);
    SupportSet s;
    s.idx_ = std::move(v);
    return s;
  }

  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  bool contains(Index i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }
  /// Largest index + 1 (0 when empty).
  Index bound() const noexcept { return idx_.empty() ? 0 : idx_.back() + 1; }

  const std::vector<Index>& indices() const noexcept { return idx_; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  /// Mask vector of length n: 1 on the set, 0 elsewhere.
  Vector indicator(Index n) const {
    detail::require(bound() <= n, "SupportSet: index out of range");
    Vector m = Vector::Zero(n);
    for (Index i : idx_) m[i] = 1.0;
    return m;
  }

  SupportSet complement(Index n) const {
    detail::require(bound() <= n, "SupportSet: index out of range");
    std::vector<Index> v;
    v.reserve(static_cast<std::size_t>(n) - idx_.size());
    std::size_t j = 0;
    for (Index i = 0; i < n; ++i) {
      if (j < idx_.size() && idx_[j] == i) {
        ++j;
        continue;
      }
      v.push_back(i);
    }
    SupportSet s;
    s.idx_ = std::move(v);
    return s;
  }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<Index> idx_;
};

/// x restricted to S (entries outside S zeroed).
inline Vector restrict_to(const Vector& x, const SupportSet& s) {
  detail::require(s.bound() <= x.size(), "restrict_to: index out of range");
  Vector out = Vector::Zero(x.size());
  for (Index i : s) out[i] = x[i];
  return out;
}

/// Scatter v (length |S|) into a length-n vector at the positions of S.
inline Vector embed(const Vector& v, const SupportSet& s, Index n) {
  detail::require(static_cast<Index>(s.size()) == v.size(),
                  "embed: value count does not match support size");
  detail::require(s.bound() <= n, "embed: index out of range");
  Vector out = Vector::Zero(n);
  Index k = 0;
  for (Index i : s) out[i] = v[k++];
  return out;
}

/// Gather the entries of x indexed by S.
inline Vector gather(const Vector& x, const SupportSet& s) {
  detail::require(s.bound() <= x.size(), "gather: index out of range");
  Vector out(static_cast<Index>(s.size()));
  Index k = 0;
  for (Index i : s) out[k++] = x[i];
  return out;
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// Validates the SignalVector invariants (nonempty, finite).
inline void require_signal(const Vector& x, const char* what) {
  detail::require(x.size() >= 1, std::string(what) + ": empty vector");
  detail::require(x.allFinite(), std::string(what) + ": non-finite entry");
}

}  // namespace lcs

#endif  // LCS_TYPES_HPP
