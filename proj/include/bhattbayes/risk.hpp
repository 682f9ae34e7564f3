#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bhattbayes/core.hpp"
#include "bhattbayes/estimators.hpp"
#include "bhattbayes/posterior.hpp"

namespace bhattbayes {

/// Finitely supported prior on p_0 for a binomial experiment.
class DiscretePrior {
 public:
  /// Weights must sum to one within 1e-9; they are renormalized exactly.
  DiscretePrior(std::vector<double> support, std::vector<double> weights);
  static DiscretePrior point_mass(double p0);

  std::size_t size() const noexcept { return support_.size(); }
  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
};

double log_binomial_coefficient(int trials, int successes);

/// C(N, n) p^n (1-p)^(N-n), computed in log space; exact at p in {0, 1}.
double binomial_pmf(int trials, int successes, double p);

/// Prior predictive Pr(n) under a Beta(beta, beta) prior.
double beta_binomial_pmf(int trials, int successes, double prior_beta);

/// Expected loss over outcomes n ~ Binomial(N, p0) of the table's estimate.
double pointwise_risk(double p0, const EstimatorTable& table, LossKind loss);

/// Posterior expected loss of a fixed estimate, from the exact moments.
double posterior_risk(const Posterior& post, const ProbVector& estimate, LossKind loss);

/// Bayes risk under a Beta(beta, beta) prior, exact.
double bayes_risk(double prior_beta, const EstimatorTable& table, LossKind loss);

/// Bayes risk under a discrete prior: sum_m w_m R(p_m).
double bayes_risk(const DiscretePrior& prior, const EstimatorTable& table, LossKind loss);

struct MaxRiskOptions {
  int grid = 2001;       // uniform scan points on [0, 1]
  int refine = 3;        // local maxima refined by golden section
  double tol = 1e-8;     // refinement bracket width
};

struct RiskPeak {
  double p0 = 0.0;
  double value = 0.0;
};

/// Refined local maxima of the pointwise risk, largest first (at most
/// opts.refine of them).
std::vector<RiskPeak> risk_peaks(const EstimatorTable& table, LossKind loss,
                                 const MaxRiskOptions& opts = {});

/// Global maximum of the pointwise risk over p0 in [0, 1].
RiskPeak max_risk(const EstimatorTable& table, LossKind loss, const MaxRiskOptions& opts = {});

/// Pointwise risk at `points` uniformly spaced values of p0 (endpoints
/// included).
std::vector<std::pair<double, double>> risk_curve(const EstimatorTable& table, LossKind loss,
                                                  int points);

/// (r_mean - r_Bayes) / r_Bayes for one posterior, where both are posterior
/// risks. Throws NumericError when r_Bayes is zero.
double relative_suboptimality(const Posterior& post, LossKind loss = LossKind::OneMinusBSquared);

struct RiskReport {
  LossKind loss = LossKind::OneMinusBSquared;
  std::string estimator;
  int trials = 0;
  double value = 0.0;
  std::optional<double> argmax_p;
  std::vector<std::pair<double, double>> per_point;
};

RiskReport max_risk_report(const EstimatorTable& table, LossKind loss, std::string estimator,
                           const MaxRiskOptions& opts = {});

/// Pointwise risk for a K-outcome multinomial experiment with N draws.
struct MultinomialRisk {
  double value = 0.0;
  double standard_error = 0.0;  // zero when enumerated exactly
  bool exact = true;
  std::uint64_t outcomes = 0;   // enumerated outcomes or Monte-Carlo draws
};

using CountEstimator = std::function<ProbVector(std::span<const int>)>;

/// Enumerates all count vectors when there are at most max_enumerated of
/// them, otherwise averages `draws` seeded Monte-Carlo experiments.
MultinomialRisk multinomial_pointwise_risk(const ProbVector& p, int trials,
                                           const CountEstimator& estimator, LossKind loss,
                                           std::uint64_t seed, std::uint64_t draws = 100000,
                                           std::uint64_t max_enumerated = 100000);

}  // namespace bhattbayes
