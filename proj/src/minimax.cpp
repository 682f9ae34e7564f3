#include "bhattbayes/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "bhattbayes/errors.hpp"
#include "bhattbayes/optimize.hpp"
#include "bhattbayes/parallel.hpp"

namespace bhattbayes {

double conjugate_max_risk(int trials, LossKind loss, EstimatorKind family, double prior_beta,
                          const MaxRiskOptions& risk) {
  return max_risk(estimator_table(family, trials, prior_beta), loss, risk).value;
}

BetaScanResult beta_scan(const BetaScanOptions& opts) {
  if (!(opts.beta_min > 0.0) || !(opts.beta_max > opts.beta_min)) {
    throw std::invalid_argument("beta_scan: need 0 < beta_min < beta_max");
  }
  if (!(opts.step > 0.0)) throw std::invalid_argument("beta_scan: step must be positive");
  if (opts.family == EstimatorKind::MLE) throw std::invalid_argument("beta_scan: the MLE has no prior");

  const auto count = static_cast<std::size_t>(std::floor((opts.beta_max - opts.beta_min) / opts.step + 1e-9)) + 1;
  auto beta_at = [&](std::size_t i) { return std::min(opts.beta_max, opts.beta_min + static_cast<double>(i) * opts.step); };
  auto objective = [&](double beta) {
    return conjugate_max_risk(opts.trials, opts.loss, opts.family, beta, opts.risk);
  };

  BetaScanResult result;
  result.curve = parallel_map(count, [&](std::size_t i) {
    return BetaScanPoint{beta_at(i), objective(beta_at(i))};
  });

  const auto best = static_cast<std::size_t>(
      std::min_element(result.curve.begin(), result.curve.end(),
                       [](const BetaScanPoint& a, const BetaScanPoint& b) { return a.max_risk < b.max_risk; }) -
      result.curve.begin());
  result.beta_star = result.curve[best].beta;
  result.max_risk_star = result.curve[best].max_risk;
  if (count >= 2) {
    const double lo = result.curve[best == 0 ? 0 : best - 1].beta;
    const double hi = result.curve[std::min(best + 1, count - 1)].beta;
    const auto refined = golden_section_minimize(objective, lo, hi, opts.beta_tol);
    if (refined.value < result.max_risk_star) {
      result.beta_star = refined.x;
      result.max_risk_star = refined.value;
    }
  }
  return result;
}

namespace {

struct BinaryPosteriorMoments {
  double diag0 = 0.0;  // sum v_m p_m
  double diag1 = 0.0;  // sum v_m (1 - p_m)
  double cross = 0.0;  // sum v_m sqrt(p_m (1 - p_m))
  double root0 = 0.0;  // sum v_m sqrt(p_m)
  double root1 = 0.0;  // sum v_m sqrt(1 - p_m)
  double mass = 0.0;   // sum v_m
};

// Unnormalized posterior moments for outcome n, weights v_m = w_m Pr(n | p_m).
BinaryPosteriorMoments outcome_moments(const DiscretePrior& prior, int trials, int n) {
  BinaryPosteriorMoments mom;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    const double p = prior.support()[m];
    const double v = prior.weights()[m] * binomial_pmf(trials, n, p);
    if (v == 0.0) continue;
    mom.mass += v;
    mom.diag0 += v * p;
    mom.diag1 += v * (1.0 - p);
    mom.cross += v * std::sqrt(p * (1.0 - p));
    mom.root0 += v * std::sqrt(p);
    mom.root1 += v * std::sqrt(1.0 - p);
  }
  return mom;
}

}  // namespace

EstimatorTable bayes_estimator_for_discrete_prior(const DiscretePrior& prior, int trials, LossKind loss) {
  if (trials < 1) throw std::invalid_argument("need N >= 1");
  double prior_mean = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) prior_mean += prior.weights()[m] * prior.support()[m];

  std::vector<ProbVector> points;
  points.reserve(prior.size());
  for (double p : prior.support()) points.push_back(ProbVector::binary(p));

  EstimatorTable table{trials, {}};
  table.rows.reserve(static_cast<std::size_t>(trials) + 1);
  std::vector<double> post_weights(prior.size());
  for (int n = 0; n <= trials; ++n) {
    double mass = 0.0;
    for (std::size_t m = 0; m < prior.size(); ++m) {
      post_weights[m] = prior.weights()[m] * binomial_pmf(trials, n, prior.support()[m]);
      mass += post_weights[m];
    }
    if (!(mass > 0.0)) {
      table.rows.push_back(ProbVector::binary(std::clamp(prior_mean, 0.0, 1.0)));
      continue;
    }
    const Posterior post = ParticlePosterior::from_unnormalized(points, post_weights);
    table.rows.push_back(bayes_estimate(loss, post));
  }
  return table;
}

double bayes_risk_of_bayes_estimator(const DiscretePrior& prior, int trials, LossKind loss) {
  if (trials < 1) throw std::invalid_argument("need N >= 1");
  double fidelity = 0.0;
  for (int n = 0; n <= trials; ++n) {
    const auto mom = outcome_moments(prior, trials, n);
    if (mom.mass == 0.0) continue;
    if (loss == LossKind::OneMinusBSquared) {
      const double half_sum = 0.5 * (mom.diag0 + mom.diag1);
      const double half_diff = 0.5 * (mom.diag0 - mom.diag1);
      fidelity += half_sum + std::hypot(half_diff, mom.cross);
    } else {
      fidelity += std::hypot(mom.root0, mom.root1);
    }
  }
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

void KempthorneConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("kempthorne: need N >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("kempthorne: tol must be positive");
  if (!(alpha_mix > 0.0 && alpha_mix < 1.0)) throw std::invalid_argument("kempthorne: alpha must lie in (0, 1)");
  if (max_outer_iters < 1) throw std::invalid_argument("kempthorne: need at least one outer iteration");
  if (restarts < 1) throw std::invalid_argument("kempthorne: need at least one restart");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("kempthorne: inner tolerance must be positive");
}

DiscretePrior consolidate_prior(const DiscretePrior& prior, double distance, double floor) {
  std::vector<std::size_t> order(prior.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return prior.support()[a] < prior.support()[b]; });

  std::vector<double> support;
  std::vector<double> weights;
  for (std::size_t idx : order) {
    const double p = prior.support()[idx];
    const double w = prior.weights()[idx];
    if (!support.empty() && p - support.back() < distance) {
      const double total = weights.back() + w;
      if (total > 0.0) support.back() = (support.back() * weights.back() + p * w) / total;
      weights.back() = total;
    } else {
      support.push_back(p);
      weights.push_back(w);
    }
  }
  std::vector<double> kept_support;
  std::vector<double> kept_weights;
  for (std::size_t m = 0; m < support.size(); ++m) {
    if (weights[m] >= floor) {
      kept_support.push_back(std::clamp(support[m], 0.0, 1.0));
      kept_weights.push_back(weights[m]);
    }
  }
  if (kept_support.empty()) {
    const auto heaviest = static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
    return DiscretePrior::point_mass(std::clamp(support[heaviest], 0.0, 1.0));
  }
  const double total = std::accumulate(kept_weights.begin(), kept_weights.end(), 0.0);
  for (double& w : kept_weights) w /= total;
  return DiscretePrior(std::move(kept_support), std::move(kept_weights));
}

namespace {

constexpr double kLogitClamp = 1e-12;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) {
  p = std::clamp(p, kLogitClamp, 1.0 - kLogitClamp);
  return std::log(p) - std::log1p(-p);
}

// Parameters: logit of each support point, then log of each weight.
std::vector<double> encode(const DiscretePrior& prior) {
  std::vector<double> theta;
  theta.reserve(2 * prior.size());
  for (double p : prior.support()) theta.push_back(logit(p));
  for (double w : prior.weights()) theta.push_back(std::log(std::max(w, 1e-300)));
  return theta;
}

DiscretePrior decode(std::span<const double> theta) {
  const std::size_t m = theta.size() / 2;
  std::vector<double> support(m);
  std::vector<double> weights(m);
  const double top = *std::max_element(theta.begin() + static_cast<std::ptrdiff_t>(m), theta.end());
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    support[i] = logistic(theta[i]);
    weights[i] = std::exp(theta[m + i] - top);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return DiscretePrior(std::move(support), std::move(weights));
}

struct InnerResult {
  DiscretePrior prior = DiscretePrior::point_mass(0.5);
  double value = 0.0;
};

InnerResult inner_maximize(const DiscretePrior& start, const KempthorneConfig& cfg, std::uint64_t seed) {
  auto objective = [&](std::span<const double> theta) {
    return -bayes_risk_of_bayes_estimator(decode(theta), cfg.trials, cfg.loss);
  };
  const auto base = encode(start);

  auto run = [&](std::size_t restart) {
    std::vector<double> theta = base;
    if (restart > 0) {
      std::mt19937_64 rng(seed + 7919 * restart);
      std::normal_distribution<double> noise(0.0, cfg.restart_spread);
      for (double& x : theta) x += noise(rng);
    }
    NelderMeadOptions opts;
    opts.diameter_tol = cfg.inner_tol;
    opts.max_evaluations = cfg.inner_max_evaluations;
    double best = objective(theta);
    // Restarting the simplex from its own optimum escapes premature collapse.
    for (int cycle = 0; cycle < 10; ++cycle) {
      auto res = nelder_mead_minimize(objective, theta, opts);
      const bool improved = res.value < best - 1e-14;
      if (res.value < best) {
        best = res.value;
        theta = std::move(res.x);
      }
      if (!improved) break;
    }
    return InnerResult{decode(theta), -best};
  };

  const auto results = parallel_map(static_cast<std::size_t>(cfg.restarts), run);
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].value > results[best].value) best = r;
  if (!std::isfinite(results[best].value)) {
    throw NumericError("kempthorne: inner optimization produced a non-finite Bayes risk");
  }
  return results[best];
}

DiscretePrior add_support_point(const DiscretePrior& prior, double location, double alpha) {
  std::vector<double> support = prior.support();
  std::vector<double> weights = prior.weights();
  const double share = alpha / static_cast<double>(weights.size());
  for (double& w : weights) w = std::max(0.0, w - share);
  support.push_back(location);
  weights.push_back(alpha);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return DiscretePrior(std::move(support), std::move(weights));
}

}  // namespace

DiscretePrior default_initial_prior(int trials, LossKind loss) {
  BetaScanOptions scan;
  scan.trials = trials;
  scan.loss = loss;
  scan.family = bayes_kind_for(loss);
  scan.beta_min = 0.05;
  scan.beta_max = 2.0;
  scan.step = 0.05;
  scan.beta_tol = 1e-3;
  const auto best = beta_scan(scan);
  const auto peaks = risk_peaks(estimator_table(scan.family, trials, best.beta_star), loss);
  const double first = peaks.front().p0;
  double second = 1.0 - first;
  if (peaks.size() > 1) second = peaks[1].p0;
  if (std::abs(first - second) < 1e-4) return DiscretePrior::point_mass(first);
  return DiscretePrior({std::min(first, second), std::max(first, second)}, {0.5, 0.5});
}

KempthorneResult kempthorne(const KempthorneConfig& config, const DiscretePrior& init) {
  config.validate();
  KempthorneResult result;
  DiscretePrior prior = consolidate_prior(init, config.merge_distance, 0.0);
  std::optional<InnerResult> previous;

  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    InnerResult inner = inner_maximize(prior, config, config.seed + 104729ULL * static_cast<std::uint64_t>(iter));
    inner.prior = consolidate_prior(inner.prior, config.merge_distance, config.weight_floor);
    inner.value = bayes_risk_of_bayes_estimator(inner.prior, config.trials, config.loss);
    // Keep the previous optimum if the enlarged search did worse: priors with
    // fewer support points are limits of the larger family.
    if (previous && previous->value > inner.value) inner = *previous;

    EstimatorTable table = bayes_estimator_for_discrete_prior(inner.prior, config.trials, config.loss);
    const double avg = bayes_risk(inner.prior, table, config.loss);
    const RiskPeak peak = max_risk(table, config.loss, config.risk);
    const double diff = std::abs(avg - peak.value) / avg;

    result.history.push_back({iter, avg, peak.value, peak.p0, inner.prior.size()});
    result.prior = inner.prior;
    result.estimator = std::move(table);
    result.avg_risk = avg;
    result.max_risk = peak.value;
    result.diff = diff;
    result.outer_iters = iter;
    if (diff <= config.tol) {
      result.converged = true;
      break;
    }
    previous = inner;
    prior = add_support_point(inner.prior, peak.p0, config.alpha_mix);
  }
  return result;
}

}  // namespace bhattbayes
