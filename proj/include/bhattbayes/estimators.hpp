#pragma once

#include <string_view>
#include <vector>

#include "bhattbayes/core.hpp"
#include "bhattbayes/posterior.hpp"

namespace bhattbayes {

enum class EstimatorKind { BayesB1, BayesB2, PosteriorMean, MLE };

std::string_view to_string(EstimatorKind kind) noexcept;

/// The Bayes estimator for a loss: BayesB1 for 1-B, BayesB2 for 1-B^2.
EstimatorKind bayes_kind_for(LossKind loss) noexcept;

/// Bayes estimator under 1-B: normalize E[sqrt p] to unit length and square
/// it element-wise.
ProbVector bayes_b1(const Posterior& post);

/// Bayes estimator under 1-B^2: square of the Perron eigenvector of the
/// moment matrix.
ProbVector bayes_b2(const Posterior& post);

/// Bayes estimator for the given loss.
ProbVector bayes_estimate(LossKind loss, const Posterior& post);

/// Any posterior-based estimator (MLE is not one and is rejected).
ProbVector estimate(EstimatorKind kind, const Posterior& post);

/// (n/N, 1 - n/N).
ProbVector mle(int successes, int trials);

/// Estimates for every outcome n = 0..N of a binomial experiment.
struct EstimatorTable {
  int trials = 0;
  std::vector<ProbVector> rows;  // rows[n] is the estimate after n successes

  const ProbVector& operator[](int n) const { return rows.at(static_cast<std::size_t>(n)); }
};

/// Table for a Beta(beta, beta) prior (ignored by MLE). Throws NumericError
/// if the first component is not nondecreasing in n.
EstimatorTable estimator_table(EstimatorKind kind, int trials, double prior_beta);

/// Table whose every row is the same estimate.
EstimatorTable constant_table(int trials, const ProbVector& estimate);

}  // namespace bhattbayes
