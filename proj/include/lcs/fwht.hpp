#ifndef LCS_FWHT_HPP
#define LCS_FWHT_HPP

#include <bit>
#include <cstdint>
#include <span>

#include "lcs/error.hpp"

namespace lcs {

constexpr bool is_power_of_two(std::int64_t n) noexcept {
  return n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n));
}

/// Unnormalized in-place Walsh-Hadamard transform, natural (Sylvester)
/// ordering: out[i] = sum_j (-1)^popcount(i & j) in[j].
inline void fwht_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  detail::require(is_power_of_two(static_cast<std::int64_t>(n)),
                  "fwht: length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace lcs

#endif  // LCS_FWHT_HPP
