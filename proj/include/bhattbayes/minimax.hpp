#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bhattbayes/core.hpp"
#include "bhattbayes/estimators.hpp"
#include "bhattbayes/risk.hpp"

namespace bhattbayes {

// ---------------------------------------------------------------------------
// Restricted search over conjugate Beta(beta, beta) priors
// ---------------------------------------------------------------------------

struct BetaScanOptions {
  int trials = 10;
  LossKind loss = LossKind::OneMinusBSquared;
  EstimatorKind family = EstimatorKind::BayesB2;  // BayesB1, BayesB2 or PosteriorMean
  double beta_min = 0.05;
  double beta_max = 2.0;
  double step = 0.01;        // scan resolution
  double beta_tol = 1e-4;    // golden-section refinement bracket
  MaxRiskOptions risk;
};

struct BetaScanPoint {
  double beta = 0.0;
  double max_risk = 0.0;
};

struct BetaScanResult {
  double beta_star = 0.0;
  double max_risk_star = 0.0;
  std::vector<BetaScanPoint> curve;  // the uniform scan, ascending beta
};

/// Maximum pointwise risk of the family's estimator as a function of beta,
/// and the beta minimizing it.
BetaScanResult beta_scan(const BetaScanOptions& opts);

/// Maximum pointwise risk of the family's estimator for one beta.
double conjugate_max_risk(int trials, LossKind loss, EstimatorKind family, double prior_beta,
                          const MaxRiskOptions& risk = {});

// ---------------------------------------------------------------------------
// Least favorable prior (Kempthorne)
// ---------------------------------------------------------------------------

/// Bayes estimator table for a discrete prior on p0. Outcomes with zero
/// prior predictive probability get the prior-mean estimate.
EstimatorTable bayes_estimator_for_discrete_prior(const DiscretePrior& prior, int trials, LossKind loss);

/// Bayes risk of the prior's own Bayes estimator. Uses the closed form
/// 1 - sum_n lambda_max(sum_m w_m Pr(n|p_m) P_m) (and the vector-norm
/// analogue for 1-B), so it never materializes the table.
double bayes_risk_of_bayes_estimator(const DiscretePrior& prior, int trials, LossKind loss);

struct KempthorneConfig {
  int trials = 10;
  LossKind loss = LossKind::OneMinusBSquared;
  double tol = 1e-3;
  double alpha_mix = 0.01;
  int max_outer_iters = 50;
  int restarts = 5;
  double restart_spread = 0.5;      // std-dev of restart perturbations, in parameter space
  double inner_tol = 1e-6;          // Nelder-Mead simplex diameter
  int inner_max_evaluations = 40000;
  double merge_distance = 1e-4;
  double weight_floor = 1e-9;       // support points lighter than this are dropped
  std::uint64_t seed = 0;
  MaxRiskOptions risk;

  void validate() const;
};

struct KempthorneIteration {
  int iteration = 0;
  double avg_risk = 0.0;
  double max_risk = 0.0;
  double argmax_p = 0.0;
  std::size_t support_size = 0;
};

struct KempthorneResult {
  DiscretePrior prior = DiscretePrior::point_mass(0.5);
  EstimatorTable estimator;
  double avg_risk = 0.0;  // lower bound on the minimax risk
  double max_risk = 0.0;  // upper bound on the minimax risk
  double diff = 0.0;      // |avg - max| / avg
  int outer_iters = 0;
  bool converged = false;
  std::vector<KempthorneIteration> history;
};

/// Two equally weighted points at the two largest local maxima of the
/// pointwise risk of the best conjugate Bayes estimator.
DiscretePrior default_initial_prior(int trials, LossKind loss);

KempthorneResult kempthorne(const KempthorneConfig& config, const DiscretePrior& init);

/// Merges support points closer than `distance` (weights added, location
/// weight-averaged) and drops points with weight below `floor`.
DiscretePrior consolidate_prior(const DiscretePrior& prior, double distance, double floor);

}  // namespace bhattbayes
