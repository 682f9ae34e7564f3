#include "bhattbayes/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bhattbayes/errors.hpp"
#include "bhattbayes/linalg.hpp"

namespace bhattbayes {

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::BayesB1: return "bayes_b1";
    case EstimatorKind::BayesB2: return "bayes_b2";
    case EstimatorKind::PosteriorMean: return "mean";
    case EstimatorKind::MLE: return "mle";
  }
  return "unknown";
}

EstimatorKind bayes_kind_for(LossKind loss) noexcept {
  return loss == LossKind::OneMinusB ? EstimatorKind::BayesB1 : EstimatorKind::BayesB2;
}

namespace {

ProbVector square_unit_vector(std::vector<double> a) {
  for (double& x : a) x *= x;
  return ProbVector(std::move(a));
}

}  // namespace

ProbVector bayes_b1(const Posterior& post) {
  std::vector<double> v = sqrt_moment_vector(post);
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (!(norm2 > 0.0)) throw NumericError("bayes_b1: E[sqrt p] is the zero vector");
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;
  return square_unit_vector(std::move(v));
}

ProbVector bayes_b2(const Posterior& post) {
  return square_unit_vector(top_eigenpair(moment_matrix(post)).vector);
}

ProbVector bayes_estimate(LossKind loss, const Posterior& post) {
  return loss == LossKind::OneMinusB ? bayes_b1(post) : bayes_b2(post);
}

ProbVector estimate(EstimatorKind kind, const Posterior& post) {
  switch (kind) {
    case EstimatorKind::BayesB1: return bayes_b1(post);
    case EstimatorKind::BayesB2: return bayes_b2(post);
    case EstimatorKind::PosteriorMean: return posterior_mean(post);
    case EstimatorKind::MLE: break;
  }
  throw std::invalid_argument("the MLE is not a function of the posterior");
}

ProbVector mle(int successes, int trials) {
  if (trials < 1) throw std::invalid_argument("mle: need N >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("mle: need 0 <= n <= N, got n=" + std::to_string(successes));
  }
  const double p0 = static_cast<double>(successes) / trials;
  return ProbVector({p0, 1.0 - p0});
}

EstimatorTable estimator_table(EstimatorKind kind, int trials, double prior_beta) {
  if (trials < 1) throw std::invalid_argument("estimator_table: need N >= 1");
  EstimatorTable table{trials, {}};
  table.rows.reserve(static_cast<std::size_t>(trials) + 1);
  for (int n = 0; n <= trials; ++n) {
    if (kind == EstimatorKind::MLE) {
      table.rows.push_back(mle(n, trials));
    } else {
      table.rows.push_back(estimate(kind, posterior_update(prior_beta, trials, n)));
    }
  }
  for (int n = 1; n <= trials; ++n) {
    if (table[n][0] < table[n - 1][0] - 1e-12) {
      throw NumericError("estimator_table: " + std::string(to_string(kind)) +
                         " is not monotone at n=" + std::to_string(n));
    }
  }
  return table;
}

EstimatorTable constant_table(int trials, const ProbVector& estimate) {
  if (trials < 1) throw std::invalid_argument("constant_table: need N >= 1");
  return EstimatorTable{trials, std::vector<ProbVector>(static_cast<std::size_t>(trials) + 1, estimate)};
}

}  // namespace bhattbayes
