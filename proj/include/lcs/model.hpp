#ifndef LCS_MODEL_HPP
#define LCS_MODEL_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lcs/error.hpp"
#include "lcs/fwht.hpp"
#include "lcs/rng.hpp"
#include "lcs/types.hpp"

namespace lcs {

/// Anything the solvers can drive: an m x n linear map with its adjoint.
template <class Op>
concept LinearOperator = requires(const Op& op, const Vector& v) {
  { op.rows() } -> std::convertible_to<Index>;
  { op.cols() } -> std::convertible_to<Index>;
  { op.apply(v) } -> std::convertible_to<Vector>;
  { op.apply_adjoint(v) } -> std::convertible_to<Vector>;
};

enum class OperatorKind { dense, partial_hadamard };
enum class Normalization { none, unit_columns, spectral };

NLOHMANN_JSON_SERIALIZE_ENUM(OperatorKind,
                             {{OperatorKind::dense, "dense"},
                              {OperatorKind::partial_hadamard,
                               "partial-hadamard"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Normalization,
                             {{Normalization::none, "none"},
                              {Normalization::unit_columns, "unit-columns"},
                              {Normalization::spectral, "spectral"}})

/// Constructor arguments of a seeded operator. Payloads are regenerated from
/// the seed and never serialized.
struct OperatorDescriptor {
  OperatorKind kind = OperatorKind::dense;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::unit_columns;
  bool random_signs = true;  // partial-hadamard only

  friend bool operator==(const OperatorDescriptor&,
                         const OperatorDescriptor&) = default;
};

inline void to_json(nlohmann::json& j, const OperatorDescriptor& d) {
  j = nlohmann::json{{"kind", d.kind}, {"m", d.m},     {"n", d.n},
                     {"seed", d.seed}, {"normalization", d.normalization}};
  if (d.kind == OperatorKind::partial_hadamard)
    j["random_signs"] = d.random_signs;
}

inline void from_json(const nlohmann::json& j, OperatorDescriptor& d) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "kind" && k != "m" && k != "n" && k != "seed" &&
        k != "normalization" && k != "random_signs")
      throw InvalidArgument("operator descriptor: unknown key '" + k + "'");
  }
  d.kind = j.at("kind").get<OperatorKind>();
  d.m = j.at("m").get<Index>();
  d.n = j.at("n").get<Index>();
  d.seed = j.value("seed", std::uint64_t{0});
  d.normalization = j.value("normalization", Normalization::unit_columns);
  d.random_signs = j.value("random_signs", true);
}

/// The m x n measurement map: a dense coefficient block or a subsampled,
/// sign-randomized Walsh-Hadamard transform applied in O(n log n).
/// Immutable; copies share the payload.
class SensingOperator {
 public:
  static SensingOperator dense(Matrix a) {
    detail::require(a.rows() >= 1 && a.cols() >= 1,
                    "dense operator: empty matrix");
    SensingOperator op;
    op.payload_ = Dense{std::make_shared<const Matrix>(std::move(a))};
    return op;
  }

  /// rows: selected transform rows; signs: per-column +-1 of the full
  /// transform; cols: column map of the (possibly restricted) operator.
  static SensingOperator hadamard(Index order, std::vector<Index> rows,
                                  std::vector<double> signs,
                                  std::vector<Index> cols) {
    detail::require(is_power_of_two(order),
                    "partial_hadamard: n must be a power of two");
    detail::require(static_cast<Index>(signs.size()) == order,
                    "partial_hadamard: sign vector length");
    detail::require(!rows.empty() && !cols.empty(),
                    "partial_hadamard: empty row or column selection");
    for (Index r : rows)
      detail::require(r >= 0 && r < order, "partial_hadamard: row index");
    for (Index c : cols)
      detail::require(c >= 0 && c < order, "partial_hadamard: column index");
    SensingOperator op;
    op.payload_ =
        Hadamard{order, std::make_shared<const std::vector<Index>>(std::move(rows)),
                 std::make_shared<const std::vector<double>>(std::move(signs)),
                 std::make_shared<const std::vector<Index>>(std::move(cols))};
    return op;
  }

  OperatorKind kind() const noexcept {
    return std::holds_alternative<Dense>(payload_) ? OperatorKind::dense
                                                   : OperatorKind::partial_hadamard;
  }

  Index rows() const noexcept {
    if (auto* d = std::get_if<Dense>(&payload_)) return d->a->rows();
    return static_cast<Index>(std::get<Hadamard>(payload_).rows->size());
  }

  Index cols() const noexcept {
    if (auto* d = std::get_if<Dense>(&payload_)) return d->a->cols();
    return static_cast<Index>(std::get<Hadamard>(payload_).cols->size());
  }

  Vector apply(const Vector& x) const {
    detail::require(x.size() == cols(), "apply: dimension mismatch");
    if (auto* d = std::get_if<Dense>(&payload_)) {
      // Sparse inputs (every iterate) only touch their own columns.
      const Index nnz = (x.array() != 0.0).count();
      if (4 * nnz > x.size()) return (*d->a) * x;
      Vector out = Vector::Zero(rows());
      for (Index j = 0; j < x.size(); ++j)
        if (x[j] != 0.0) out.noalias() += x[j] * d->a->col(j);
      return out;
    }
    const auto& h = std::get<Hadamard>(payload_);
    std::vector<double> z(static_cast<std::size_t>(h.order), 0.0);
    const auto& colmap = *h.cols;
    const auto& signs = *h.signs;
    for (std::size_t j = 0; j < colmap.size(); ++j) {
      const auto c = static_cast<std::size_t>(colmap[j]);
      z[c] += signs[c] * x[static_cast<Index>(j)];
    }
    fwht_inplace(z);
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.order));
    Vector out(rows());
    for (std::size_t i = 0; i < h.rows->size(); ++i)
      out[static_cast<Index>(i)] = z[static_cast<std::size_t>((*h.rows)[i])] * scale;
    return out;
  }

  Vector apply_adjoint(const Vector& r) const {
    detail::require(r.size() == rows(), "apply_adjoint: dimension mismatch");
    if (auto* d = std::get_if<Dense>(&payload_)) return d->a->transpose() * r;
    const auto& h = std::get<Hadamard>(payload_);
    std::vector<double> z(static_cast<std::size_t>(h.order), 0.0);
    for (std::size_t i = 0; i < h.rows->size(); ++i)
      z[static_cast<std::size_t>((*h.rows)[i])] += r[static_cast<Index>(i)];
    fwht_inplace(z);
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.order));
    const auto& colmap = *h.cols;
    const auto& signs = *h.signs;
    Vector out(cols());
    for (std::size_t j = 0; j < colmap.size(); ++j) {
      const auto c = static_cast<std::size_t>(colmap[j]);
      out[static_cast<Index>(j)] = signs[c] * z[c] * scale;
    }
    return out;
  }

  /// Operator on |S| columns: apply(restricted, v) == apply(*this, embed(v, S)).
  SensingOperator restrict_columns(const SupportSet& s) const {
    detail::require(!s.empty(), "restrict_columns: empty support");
    detail::require(s.bound() <= cols(), "restrict_columns: index out of range");
    if (auto* d = std::get_if<Dense>(&payload_)) {
      Matrix sub(d->a->rows(), static_cast<Index>(s.size()));
      Index k = 0;
      for (Index j : s) sub.col(k++) = d->a->col(j);
      return dense(std::move(sub));
    }
    const auto& h = std::get<Hadamard>(payload_);
    std::vector<Index> colmap;
    colmap.reserve(s.size());
    for (Index j : s) colmap.push_back((*h.cols)[static_cast<std::size_t>(j)]);
    return hadamard(h.order, *h.rows, *h.signs, std::move(colmap));
  }

  /// Operator keeping only the listed measurement rows, in the given order.
  SensingOperator restrict_rows(const std::vector<Index>& keep) const {
    detail::require(!keep.empty(), "restrict_rows: empty row selection");
    for (Index i : keep)
      detail::require(i >= 0 && i < rows(), "restrict_rows: index out of range");
    if (auto* d = std::get_if<Dense>(&payload_)) {
      Matrix sub(static_cast<Index>(keep.size()), d->a->cols());
      for (std::size_t i = 0; i < keep.size(); ++i)
        sub.row(static_cast<Index>(i)) = d->a->row(keep[i]);
      return dense(std::move(sub));
    }
    const auto& h = std::get<Hadamard>(payload_);
    std::vector<Index> rowmap;
    rowmap.reserve(keep.size());
    for (Index i : keep) rowmap.push_back((*h.rows)[static_cast<std::size_t>(i)]);
    return hadamard(h.order, std::move(rowmap), *h.signs, *h.cols);
  }

  /// Dense copy, built column by column through apply().
  Matrix materialize() const {
    if (auto* d = std::get_if<Dense>(&payload_)) return *d->a;
    Matrix a(rows(), cols());
    Vector e = Vector::Zero(cols());
    for (Index j = 0; j < cols(); ++j) {
      e[j] = 1.0;
      a.col(j) = apply(e);
      e[j] = 0.0;
    }
    return a;
  }

  double frobenius_sq() const {
    if (auto* d = std::get_if<Dense>(&payload_)) return d->a->squaredNorm();
    const auto& h = std::get<Hadamard>(payload_);
    return static_cast<double>(rows()) * static_cast<double>(cols()) /
           static_cast<double>(h.order);
  }

  /// Non-null for the dense kind.
  const Matrix* dense_matrix() const noexcept {
    if (auto* d = std::get_if<Dense>(&payload_)) return d->a.get();
    return nullptr;
  }

  /// Set only for operators built by a seeded constructor.
  const std::optional<OperatorDescriptor>& descriptor() const noexcept {
    return desc_;
  }
  SensingOperator with_descriptor(OperatorDescriptor d) const {
    SensingOperator op = *this;
    op.desc_ = d;
    return op;
  }

 private:
  struct Dense {
    std::shared_ptr<const Matrix> a;
  };
  struct Hadamard {
    Index order;
    std::shared_ptr<const std::vector<Index>> rows;
    std::shared_ptr<const std::vector<double>> signs;
    std::shared_ptr<const std::vector<Index>> cols;
  };

  SensingOperator() = default;

  std::variant<Dense, Hadamard> payload_;
  std::optional<OperatorDescriptor> desc_;
};

inline Vector apply(const SensingOperator& op, const Vector& x) {
  return op.apply(x);
}
inline Vector apply_adjoint(const SensingOperator& op, const Vector& r) {
  return op.apply_adjoint(r);
}
inline SensingOperator restrict_columns(const SensingOperator& op,
                                        const SupportSet& s) {
  return op.restrict_columns(s);
}

/// Largest singular value by power iteration on A^T A. Stops after
/// max_iters or when the relative change drops below rel_tol.
template <LinearOperator Op>
double spectral_norm_estimate(const Op& op, std::uint64_t seed = 0,
                              int max_iters = 100, double rel_tol = 1e-9) {
  Rng rng(derive_seed(seed, {0x5bec7a1ull}));
  std::normal_distribution<double> nd;
  Vector v(op.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = nd(rng);
  v /= v.norm();
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = op.apply_adjoint(op.apply(v));
    const double lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    const double next = std::sqrt(lambda);
    const bool done = std::abs(next - sigma) < rel_tol * next;
    sigma = next;
    if (done) break;
  }
  return sigma;
}

/// i.i.d. standard normal entries, columns scaled to unit norm; spectral mode
/// additionally divides by the power-iteration estimate of the 2-norm.
inline SensingOperator gaussian_ensemble(Index m, Index n, std::uint64_t seed,
                                         Normalization norm =
                                             Normalization::unit_columns) {
  detail::require(m >= 1 && n >= 1, "gaussian_ensemble: m and n must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> nd;
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = nd(rng);
  if (norm != Normalization::none) {
    for (Index j = 0; j < n; ++j) {
      const double c = a.col(j).norm();
      if (c > 0.0) a.col(j) /= c;
    }
  }
  auto op = SensingOperator::dense(std::move(a));
  if (norm == Normalization::spectral) {
    const double sigma = spectral_norm_estimate(op, seed);
    Matrix scaled = *op.dense_matrix() / sigma;
    op = SensingOperator::dense(std::move(scaled));
  }
  return op.with_descriptor({OperatorKind::dense, m, n, seed, norm, true});
}

/// m rows of the n x n Walsh-Hadamard transform (row 0 excluded when m < n),
/// chosen uniformly without replacement and kept in ascending order, with an
/// optional random sign per column; scaled by 1/sqrt(n).
inline SensingOperator partial_hadamard(Index m, Index n, std::uint64_t seed,
                                        bool random_signs = true) {
  detail::require(is_power_of_two(n), "partial_hadamard: n must be a power of two");
  detail::require(m >= 1 && m <= n, "partial_hadamard: need 1 <= m <= n");
  Rng rng(seed);
  std::vector<Index> rows;
  if (m == n) {
    rows.resize(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
  } else {
    std::vector<Index> pool(static_cast<std::size_t>(n - 1));
    std::iota(pool.begin(), pool.end(), Index{1});
    // Partial Fisher-Yates.
    for (Index i = 0; i < m; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 2);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(pick(rng))]);
    }
    rows.assign(pool.begin(), pool.begin() + m);
    std::sort(rows.begin(), rows.end());
  }
  std::vector<double> signs(static_cast<std::size_t>(n), 1.0);
  if (random_signs) {
    std::bernoulli_distribution coin(0.5);
    for (auto& s : signs) s = coin(rng) ? 1.0 : -1.0;
  }
  std::vector<Index> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), Index{0});
  return SensingOperator::hadamard(n, std::move(rows), std::move(signs),
                                   std::move(cols))
      .with_descriptor({OperatorKind::partial_hadamard, m, n, seed,
                        Normalization::none, random_signs});
}

inline SensingOperator make_operator(const OperatorDescriptor& d) {
  if (d.kind == OperatorKind::dense)
    return gaussian_ensemble(d.m, d.n, d.seed, d.normalization);
  return partial_hadamard(d.m, d.n, d.seed, d.random_signs);
}

/// y = clean + noise when both optional parts are known.
struct MeasurementSet {
  Vector y;
  std::optional<Vector> clean;
  std::optional<Vector> noise;

  Index size() const noexcept { return y.size(); }
};

}  // namespace lcs

#endif  // LCS_MODEL_HPP
