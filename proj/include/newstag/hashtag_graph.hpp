#ifndef NEWSTAG_HASHTAG_GRAPH_HPP
#define NEWSTAG_HASHTAG_GRAPH_HPP

#include "newstag/corpus.hpp"
#include "newstag/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newstag {

/// Bijection between hashtag strings and dense indices [0, size()).
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws DataError on duplicate tokens.
  explicit Vocabulary(std::vector<std::string> tokens);

  Index size() const { return static_cast<Index>(tokens_.size()); }
  const std::string& token(Index k) const { return tokens_[static_cast<std::size_t>(k)]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<Index> find(std::string_view token) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Index> index_;
};

/// Direct-relation hashtag co-occurrence graph.
///
/// Only the strictly upper triangle is stored; the diagonal is always zero.
struct HashtagGraph {
  Vocabulary vocab;
  SparseMatrix<std::int64_t> upper;

  Index size() const { return vocab.size(); }
  Index edge_count() const { return upper.nonZeros(); }

  /// Co-occurrence weight of the unordered pair {k, l}; 0 when k == l.
  std::int64_t weight(Index k, Index l) const;

  /// Weighted degree of every node, computed exactly in integers.
  std::vector<std::int64_t> row_sums() const;

  /// Full symmetric adjacency matrix.
  template <typename Scalar>
  SparseMatrix<Scalar> adjacency() const {
    SparseMatrix<Scalar> triangle = upper.template cast<Scalar>();
    SparseMatrix<Scalar> full = triangle.template selfadjointView<Eigen::Upper>();
    full.makeCompressed();
    return full;
  }
};

/// Counts, for every unordered hashtag pair, the posts whose hashtag set
/// contains both. With weighted == false every positive count becomes 1.
/// Vocabulary order is the corpus first-appearance order.
HashtagGraph build_direct_graph(const Corpus& corpus, bool weighted = true);

enum class RelationKind { normalized_direct, all_relations_truncated, all_relations_exact };

const char* to_string(RelationKind kind);

/// Sparse symmetric nonnegative relation matrix over a graph's vocabulary.
template <typename Scalar>
struct RelationMatrix {
  RelationKind kind = RelationKind::normalized_direct;
  /// Number of power terms summed (1 for the normalized direct matrix, 0 for the exact closure).
  int terms = 1;
  SparseMatrix<Scalar> values;

  Index size() const { return values.rows(); }
};

/// N = W_dir / max_k sum_l w_kl. Throws DataError on an edgeless graph.
template <typename Scalar>
RelationMatrix<Scalar> normalize(const HashtagGraph& graph) {
  if (graph.edge_count() == 0) {
    throw DataError("cannot normalize edgeless graph");
  }
  const auto sums = graph.row_sums();
  const std::int64_t max_sum = *std::max_element(sums.begin(), sums.end());
  RelationMatrix<Scalar> result;
  result.kind = RelationKind::normalized_direct;
  result.terms = 1;
  result.values = graph.adjacency<Scalar>() / static_cast<Scalar>(max_sum);
  return result;
}

struct ClosureOptions {
  /// Maximum number of power terms N + N^2 + ... + N^k1.
  int k1 = 10;
  /// Entries with magnitude below this are pruned after each accumulation.
  double drop_tolerance = 0.0;
  /// Stop early once the relative Frobenius change of the running sum falls
  /// below this; 0 always sums exactly k1 terms.
  double convergence_tolerance = 0.0;
  /// Switch to dense products once a power fills this fraction of q^2.
  double dense_switch_density = 0.1;

  void validate() const;
};

template <typename Scalar>
struct ClosureResult {
  RelationMatrix<Scalar> matrix;
  /// ||N^t||_F / ||sum_{s<=t} N^s||_F for every accumulated term t.
  std::vector<double> relative_changes;
};

namespace detail {

template <typename Scalar>
void prune_below(SparseMatrix<Scalar>& m, double tolerance) {
  if (tolerance > 0.0) {
    m.prune([tolerance](const Index&, const Index&, const Scalar& v) {
      return std::abs(v) >= static_cast<Scalar>(tolerance);
    });
  }
}

template <typename Scalar>
void prune_below(DenseMatrix<Scalar>& m, double tolerance) {
  if (tolerance > 0.0) {
    m = (m.array().abs() < static_cast<Scalar>(tolerance)).select(Scalar(0), m);
  }
}

template <typename Scalar>
SparseMatrix<Scalar> symmetrized(const SparseMatrix<Scalar>& m) {
  SparseMatrix<Scalar> transposed = m.transpose();
  SparseMatrix<Scalar> result = (m + transposed) * Scalar(0.5);
  result.makeCompressed();
  return result;
}

template <typename Scalar>
void symmetrize_in_place(DenseMatrix<Scalar>& m) {
  const Index n = m.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const Scalar v = (m(i, j) + m(j, i)) * Scalar(0.5);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
}

}  // namespace detail

/// Truncated all-relations closure sum_{t=1..k1} N^t.
///
/// Each new power is formed as the previous power times N and explicitly
/// symmetrized, so the result is exactly symmetric. Products start sparse and
/// move to dense storage once the running power becomes dense enough.
template <typename Scalar>
ClosureResult<Scalar> all_relations_truncated(const RelationMatrix<Scalar>& normalized,
                                              const ClosureOptions& options = {}) {
  options.validate();
  if (normalized.kind != RelationKind::normalized_direct) {
    throw ValidationError("closure expects the normalized direct matrix");
  }
  const SparseMatrix<Scalar>& n = normalized.values;
  const Index q = n.rows();
  const double dense_threshold =
      options.dense_switch_density * static_cast<double>(q) * static_cast<double>(q);

  ClosureResult<Scalar> result;
  result.matrix.kind = RelationKind::all_relations_truncated;

  SparseMatrix<Scalar> power = n;
  SparseMatrix<Scalar> sum = n;
  detail::prune_below(sum, options.drop_tolerance);
  result.relative_changes.push_back(sum.nonZeros() > 0 ? 1.0 : 0.0);
  int terms = 1;

  std::optional<DenseMatrix<Scalar>> dense_power;
  std::optional<DenseMatrix<Scalar>> dense_sum;
  std::optional<DenseMatrix<Scalar>> dense_n;

  while (terms < options.k1) {
    double power_norm = 0.0;
    double sum_norm = 0.0;
    if (!dense_power && static_cast<double>(power.nonZeros()) > dense_threshold) {
      dense_power = DenseMatrix<Scalar>(power);
      dense_sum = DenseMatrix<Scalar>(sum);
      dense_n = DenseMatrix<Scalar>(n);
    }
    if (dense_power) {
      DenseMatrix<Scalar> next(q, q);
      next.noalias() = *dense_power * *dense_n;
      detail::symmetrize_in_place(next);
      detail::prune_below(next, options.drop_tolerance);
      *dense_power = std::move(next);
      *dense_sum += *dense_power;
      detail::prune_below(*dense_sum, options.drop_tolerance);
      power_norm = static_cast<double>(dense_power->norm());
      sum_norm = static_cast<double>(dense_sum->norm());
    } else {
      SparseMatrix<Scalar> next = power * n;
      power = detail::symmetrized(next);
      detail::prune_below(power, options.drop_tolerance);
      sum += power;
      detail::prune_below(sum, options.drop_tolerance);
      power_norm = static_cast<double>(power.norm());
      sum_norm = static_cast<double>(sum.norm());
    }
    ++terms;
    const double change = sum_norm > 0.0 ? power_norm / sum_norm : 0.0;
    result.relative_changes.push_back(change);
    if (options.convergence_tolerance > 0.0 && change < options.convergence_tolerance) {
      break;
    }
  }

  if (dense_sum) {
    sum = dense_sum->sparseView();
  }
  sum.makeCompressed();
  result.matrix.terms = terms;
  result.matrix.values = std::move(sum);
  return result;
}

/// Largest |eigenvalue| of a symmetric nonnegative matrix by power iteration
/// on M + I (whose dominant eigenvalue is 1 + rho for nonnegative M).
template <typename Scalar>
double spectral_radius_estimate(const SparseMatrix<Scalar>& m, int max_iterations = 20000,
                                double tolerance = 1e-14) {
  const Index q = m.rows();
  if (q == 0 || m.nonZeros() == 0) {
    return 0.0;
  }
  Vector<Scalar> v = Vector<Scalar>::Ones(q) / std::sqrt(static_cast<Scalar>(q));
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector<Scalar> w = m * v + v;
    const double next = static_cast<double>(v.dot(w));
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) {
      return 0.0;
    }
    v = w / norm;
    if (it > 0 && std::abs(next - lambda) < tolerance) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - 1.0;
}

/// Exact largest |eigenvalue| by a dense symmetric eigensolve.
template <typename Scalar>
double spectral_radius_dense(const DenseMatrix<Scalar>& m) {
  if (m.rows() == 0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed");
  }
  return static_cast<double>(solver.eigenvalues().cwiseAbs().maxCoeff());
}

struct ExactClosureOptions {
  /// Instances up to this size use dense eigensolve and dense Cholesky.
  Index dense_cap = 2000;
  /// The series is accepted only when the radius is at most 1 - margin.
  double radius_margin = 1e-6;
  /// Right-hand-side columns solved per block in the sparse path.
  Index block_columns = 256;
};

/// Closed-form closure N (I - N)^{-1}. Throws NumericalError("series
/// divergent") when the spectral radius of N is not safely below 1.
template <typename Scalar>
RelationMatrix<Scalar> all_relations_exact(const RelationMatrix<Scalar>& normalized,
                                           const ExactClosureOptions& options = {}) {
  if (normalized.kind != RelationKind::normalized_direct) {
    throw ValidationError("closure expects the normalized direct matrix");
  }
  const SparseMatrix<Scalar>& n = normalized.values;
  const Index q = n.rows();
  RelationMatrix<Scalar> result;
  result.kind = RelationKind::all_relations_exact;
  result.terms = 0;

  if (q <= options.dense_cap) {
    const DenseMatrix<Scalar> dense_n(n);
    if (spectral_radius_dense(dense_n) > 1.0 - options.radius_margin) {
      throw NumericalError("series divergent");
    }
    const DenseMatrix<Scalar> system = DenseMatrix<Scalar>::Identity(q, q) - dense_n;
    Eigen::LLT<DenseMatrix<Scalar>> llt(system);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("series divergent");
    }
    DenseMatrix<Scalar> closure = llt.solve(dense_n);
    detail::symmetrize_in_place(closure);
    result.values = closure.sparseView();
  } else {
    if (spectral_radius_estimate(n) > 1.0 - options.radius_margin) {
      throw NumericalError("series divergent");
    }
    SparseMatrix<Scalar> identity(q, q);
    identity.setIdentity();
    const SparseMatrix<Scalar> system = identity - n;
    Eigen::SimplicialLDLT<SparseMatrix<Scalar>> ldlt(system);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("series divergent");
    }
    std::vector<Eigen::Triplet<Scalar, Index>> entries;
    for (Index start = 0; start < q; start += options.block_columns) {
      const Index width = std::min(options.block_columns, q - start);
      const DenseMatrix<Scalar> rhs = DenseMatrix<Scalar>(n.middleCols(start, width));
      const DenseMatrix<Scalar> block = ldlt.solve(rhs);
      for (Index j = 0; j < width; ++j) {
        for (Index i = 0; i < q; ++i) {
          if (block(i, j) != Scalar(0)) {
            entries.emplace_back(i, start + j, block(i, j));
          }
        }
      }
    }
    SparseMatrix<Scalar> closure(q, q);
    closure.setFromTriplets(entries.begin(), entries.end());
    result.values = detail::symmetrized(closure);
  }
  result.values.makeCompressed();
  return result;
}

}  // namespace newstag

#endif  // NEWSTAG_HASHTAG_GRAPH_HPP
