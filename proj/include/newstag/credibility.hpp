#ifndef NEWSTAG_CREDIBILITY_HPP
#define NEWSTAG_CREDIBILITY_HPP

#include "newstag/corpus.hpp"
#include "newstag/hashtag_graph.hpp"
#include "newstag/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace newstag {

enum class Provenance { initial_c0, propagated, all_data_c_star };

const char* to_string(Provenance provenance);

/// Per-hashtag credibility scores over a vocabulary's indexing.
template <typename Scalar>
struct CredibilityVector {
  Vector<Scalar> values;
  Provenance provenance = Provenance::initial_c0;
  /// Regularization parameter used, for propagated vectors.
  std::optional<Scalar> mu;

  Index size() const { return values.size(); }
};

enum class PropagationMode { iterative, closed_form };

struct PropagationConfig {
  double mu = 0.4;
  int max_iterations = 100;
  /// Max-norm change below which iteration stops; 0 runs all max_iterations.
  double tolerance = 1e-9;
  PropagationMode mode = PropagationMode::iterative;
  /// Largest instance the closed form solves densely.
  Index closed_form_cap = 2000;

  void validate() const;
};

/// Weighted average of training labels per hashtag.
///
/// per_post == true counts every training post carrying the hashtag;
/// per_post == false counts every training news item whose posts carry it.
/// Hashtags unseen in training get 0.
CredibilityVector<double> init_credibility(const Corpus& corpus,
                                           const std::vector<std::string>& train_ids,
                                           const Vocabulary& vocab, bool per_post = true);

/// X = D^{-1/2} W D^{-1/2} together with the degree vector D.
template <typename Scalar>
struct NormalizedOperator {
  SparseMatrix<Scalar> x;
  Vector<Scalar> degrees;
};

/// Zero-degree rows and columns stay zero in X.
template <typename Scalar>
NormalizedOperator<Scalar> symmetric_normalize(const SparseMatrix<Scalar>& w) {
  NormalizedOperator<Scalar> result;
  const Index q = w.rows();
  result.degrees = Vector<Scalar>::Zero(q);
  for (Index col = 0; col < w.outerSize(); ++col) {
    for (typename SparseMatrix<Scalar>::InnerIterator it(w, col); it; ++it) {
      result.degrees(it.row()) += it.value();
    }
  }
  result.x = w;
  for (Index col = 0; col < result.x.outerSize(); ++col) {
    for (typename SparseMatrix<Scalar>::InnerIterator it(result.x, col); it; ++it) {
      const Scalar dk = result.degrees(it.row());
      const Scalar dl = result.degrees(it.col());
      it.valueRef() = (dk > Scalar(0) && dl > Scalar(0)) ? it.value() / std::sqrt(dk * dl)
                                                         : Scalar(0);
    }
  }
  result.x.prune(Scalar(0), 0);
  result.x.makeCompressed();
  return result;
}

template <typename Scalar>
struct PropagationResult {
  CredibilityVector<Scalar> credibility;
  /// Max-norm change ||c(t) - c(t-1)||_inf for every iteration performed.
  std::vector<Scalar> residuals;
};

/// c(t) = mu X c(t-1) + (1 - mu) c0 starting from c(0) = c0.
template <typename Scalar>
PropagationResult<Scalar> propagate_iterative(const SparseMatrix<Scalar>& x,
                                              const CredibilityVector<Scalar>& c0,
                                              const PropagationConfig& config) {
  config.validate();
  if (x.rows() != c0.size()) {
    throw ValidationError("operator and credibility sizes differ");
  }
  const Scalar mu = static_cast<Scalar>(config.mu);
  const Vector<Scalar> anchor = (Scalar(1) - mu) * c0.values;
  Vector<Scalar> current = c0.values;
  Vector<Scalar> next(current.size());

  PropagationResult<Scalar> result;
  for (int t = 0; t < config.max_iterations; ++t) {
    next.noalias() = x * current;
    next = mu * next + anchor;
    const Scalar change = current.size() > 0 ? (next - current).cwiseAbs().maxCoeff() : Scalar(0);
    current.swap(next);
    result.residuals.push_back(change);
    if (change < static_cast<Scalar>(config.tolerance)) {
      break;
    }
  }
  result.credibility.values = std::move(current);
  result.credibility.provenance = Provenance::propagated;
  result.credibility.mu = mu;
  return result;
}

/// Solves (I - mu X) c = (1 - mu) c0 directly.
template <typename Scalar>
CredibilityVector<Scalar> propagate_closed_form(const SparseMatrix<Scalar>& x,
                                                const CredibilityVector<Scalar>& c0,
                                                const PropagationConfig& config) {
  config.validate();
  const Index q = x.rows();
  if (q != c0.size()) {
    throw ValidationError("operator and credibility sizes differ");
  }
  if (q > config.closed_form_cap) {
    throw ValidationError("instance exceeds the closed-form size cap");
  }
  const Scalar mu = static_cast<Scalar>(config.mu);
  const DenseMatrix<Scalar> system =
      DenseMatrix<Scalar>::Identity(q, q) - mu * DenseMatrix<Scalar>(x);
  Eigen::LLT<DenseMatrix<Scalar>> llt(system);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("closed-form solve failed: I - mu X is not positive definite");
  }
  CredibilityVector<Scalar> result;
  result.values = llt.solve((Scalar(1) - mu) * c0.values);
  result.provenance = Provenance::propagated;
  result.mu = mu;
  return result;
}

/// Dispatches on config.mode.
template <typename Scalar>
CredibilityVector<Scalar> propagate(const SparseMatrix<Scalar>& x,
                                    const CredibilityVector<Scalar>& c0,
                                    const PropagationConfig& config) {
  if (config.mode == PropagationMode::closed_form) {
    return propagate_closed_form(x, c0, config);
  }
  return propagate_iterative(x, c0, config).credibility;
}

/// Graph-regularized cost whose unique minimizer is the propagated vector:
///
///   mu * [ sum_{k<l} W_kl (c_k/sqrt(D_kk) - c_l/sqrt(D_ll))^2 + sum_{D_kk=0} c_k^2 ]
///     + (1 - mu) * sum_k (c_k - c0_k)^2
///
/// Unordered pairs are summed once. Zero-degree nodes contribute c_k^2 to the
/// smoothness part, matching the zero rows they get in X.
template <typename Scalar>
Scalar cost_evaluate(const SparseMatrix<Scalar>& w, const Vector<Scalar>& degrees,
                     const Vector<Scalar>& c, const Vector<Scalar>& c0, Scalar mu) {
  const Index q = w.rows();
  if (degrees.size() != q || c.size() != q || c0.size() != q) {
    throw ValidationError("cost_evaluate: dimension mismatch");
  }
  Vector<Scalar> scaled(q);
  for (Index k = 0; k < q; ++k) {
    scaled(k) = degrees(k) > Scalar(0) ? c(k) / std::sqrt(degrees(k)) : Scalar(0);
  }
  Scalar smoothness = 0;
  for (Index col = 0; col < w.outerSize(); ++col) {
    for (typename SparseMatrix<Scalar>::InnerIterator it(w, col); it; ++it) {
      if (it.row() < it.col()) {
        const Scalar diff = scaled(it.row()) - scaled(it.col());
        smoothness += it.value() * diff * diff;
      }
    }
  }
  for (Index k = 0; k < q; ++k) {
    if (!(degrees(k) > Scalar(0))) {
      smoothness += c(k) * c(k);
    }
  }
  return mu * smoothness + (Scalar(1) - mu) * (c - c0).squaredNorm();
}

struct RescaleResult {
  CredibilityVector<double> credibility;
  /// Set when the input was all zero and came back unchanged.
  std::optional<std::string> warning;
};

/// Divides by the largest magnitude so scores span [-1, 1].
RescaleResult rescale_credibility(const CredibilityVector<double>& credibility);

struct Prediction {
  std::string news_id;
  Label label = Label::fake;
  double score = 0.0;
};

/// Sums credibility over the hashtags of each target's posts; +1 when the sum
/// is strictly positive, otherwise -1. With per_post == false every distinct
/// hashtag of the news counts once. Hashtags outside the vocabulary add 0.
std::vector<Prediction> predict(const Corpus& corpus, const std::vector<std::string>& target_ids,
                                const Vocabulary& vocab,
                                const CredibilityVector<double>& credibility,
                                bool per_post = true);

}  // namespace newstag

#endif  // NEWSTAG_CREDIBILITY_HPP
