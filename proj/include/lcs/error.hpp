#ifndef LCS_ERROR_HPP
#define LCS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lcs {

/// Precondition violation: bad dimensions, out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver produced non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// The adaptive step has a vanishing denominator (gradient in the null space).
class StallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but leaves nothing to work with (e.g. every
/// measurement rejected).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace detail
}  // namespace lcs

#endif  // LCS_ERROR_HPP
