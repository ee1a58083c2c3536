#ifndef LCS_HAAR_HPP
#define LCS_HAAR_HPP

#include <cmath>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/fwht.hpp"
#include "lcs/model.hpp"
#include "lcs/types.hpp"

namespace lcs {

/// Orthonormal separable 2-D Haar transform of a side x side image stored
/// row-major, `levels` dyadic levels, approximation band in the top-left
/// (side >> levels)^2 corner.
class Haar2D {
 public:
  Haar2D(Index side, int levels) : side_(side), levels_(levels) {
    detail::require(is_power_of_two(side), "Haar2D: side must be a power of two");
    detail::require(levels >= 0 && (side >> levels) >= 1,
                    "Haar2D: too many levels for this side");
  }

  Index side() const noexcept { return side_; }
  int levels() const noexcept { return levels_; }
  Index size() const noexcept { return side_ * side_; }
  Index approx_side() const noexcept { return side_ >> levels_; }

  /// Coefficients of the approximation band.
  SupportSet approximation_band() const {
    std::vector<Index> idx;
    const Index a = approx_side();
    for (Index r = 0; r < a; ++r)
      for (Index c = 0; c < a; ++c) idx.push_back(r * side_ + c);
    return SupportSet(std::move(idx));
  }

  Vector forward(const Vector& image) const {
    detail::require(image.size() == size(), "Haar2D: size mismatch");
    Vector v = image;
    std::vector<double> buf(static_cast<std::size_t>(side_));
    for (Index len = side_, l = 0; l < levels_; ++l, len >>= 1) {
      for (Index r = 0; r < len; ++r) split(v.data() + r * side_, 1, len, buf);
      for (Index c = 0; c < len; ++c) split(v.data() + c, side_, len, buf);
    }
    return v;
  }

  Vector inverse(const Vector& coeffs) const {
    detail::require(coeffs.size() == size(), "Haar2D: size mismatch");
    Vector v = coeffs;
    std::vector<double> buf(static_cast<std::size_t>(side_));
    for (int l = levels_ - 1; l >= 0; --l) {
      const Index len = side_ >> l;
      for (Index c = 0; c < len; ++c) merge(v.data() + c, side_, len, buf);
      for (Index r = 0; r < len; ++r) merge(v.data() + r * side_, 1, len, buf);
    }
    return v;
  }

 private:
  static void split(double* p, Index stride, Index len, std::vector<double>& buf) {
    const double k = std::sqrt(0.5);
    const Index h = len / 2;
    for (Index i = 0; i < h; ++i) {
      const double a = p[(2 * i) * stride];
      const double b = p[(2 * i + 1) * stride];
      buf[static_cast<std::size_t>(i)] = k * (a + b);
      buf[static_cast<std::size_t>(h + i)] = k * (a - b);
    }
    for (Index i = 0; i < len; ++i) p[i * stride] = buf[static_cast<std::size_t>(i)];
  }

  static void merge(double* p, Index stride, Index len, std::vector<double>& buf) {
    const double k = std::sqrt(0.5);
    const Index h = len / 2;
    for (Index i = 0; i < h; ++i) {
      const double a = p[i * stride];
      const double d = p[(h + i) * stride];
      buf[static_cast<std::size_t>(2 * i)] = k * (a + d);
      buf[static_cast<std::size_t>(2 * i + 1)] = k * (a - d);
    }
    for (Index i = 0; i < len; ++i) p[i * stride] = buf[static_cast<std::size_t>(i)];
  }

  Index side_;
  int levels_;
};

/// Measures an image through its Haar coefficients: apply(c) = Phi Psi^T c.
struct WaveletSensing {
  SensingOperator phi;
  Haar2D haar;

  Index rows() const { return phi.rows(); }
  Index cols() const { return haar.size(); }
  Vector apply(const Vector& c) const { return phi.apply(haar.inverse(c)); }
  Vector apply_adjoint(const Vector& r) const { return haar.forward(phi.apply_adjoint(r)); }
};

}  // namespace lcs

#endif  // LCS_HAAR_HPP
