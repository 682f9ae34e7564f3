#include "bhattbayes/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "bhattbayes/errors.hpp"
#include "bhattbayes/optimize.hpp"

namespace bhattbayes {

DiscretePrior::DiscretePrior(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw std::invalid_argument("discrete prior needs at least one support point");
  if (support_.size() != weights_.size()) {
    throw std::invalid_argument("discrete prior: " + std::to_string(support_.size()) +
                                " support points but " + std::to_string(weights_.size()) + " weights");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < support_.size(); ++m) {
    if (!(support_[m] >= 0.0 && support_[m] <= 1.0)) {
      throw std::invalid_argument("discrete prior support point outside [0, 1]: " +
                                  std::to_string(support_[m]));
    }
    if (!(weights_[m] >= 0.0) || !std::isfinite(weights_[m])) {
      throw std::invalid_argument("discrete prior weight must be nonnegative");
    }
    sum += weights_[m];
  }
  if (std::abs(sum - 1.0) > ProbVector::kSumTolerance) {
    throw std::invalid_argument("discrete prior weights sum to " + std::to_string(sum));
  }
  for (double& w : weights_) w /= sum;
}

DiscretePrior DiscretePrior::point_mass(double p0) { return DiscretePrior({p0}, {1.0}); }

double log_binomial_coefficient(int trials, int successes) {
  if (successes < 0 || successes > trials) throw std::invalid_argument("binomial coefficient out of range");
  return std::lgamma(trials + 1.0) - std::lgamma(successes + 1.0) - std::lgamma(trials - successes + 1.0);
}

double binomial_pmf(int trials, int successes, double p) {
  if (successes < 0 || successes > trials) return 0.0;
  if (p <= 0.0) return successes == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return successes == trials ? 1.0 : 0.0;
  return std::exp(log_binomial_coefficient(trials, successes) + successes * std::log(p) +
                  (trials - successes) * std::log1p(-p));
}

double beta_binomial_pmf(int trials, int successes, double prior_beta) {
  if (!(prior_beta > 0.0)) throw std::invalid_argument("prior beta must be positive");
  auto log_beta = [](double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); };
  return std::exp(log_binomial_coefficient(trials, successes) +
                  log_beta(successes + prior_beta, trials - successes + prior_beta) -
                  log_beta(prior_beta, prior_beta));
}

namespace {

void require_binary_table(const EstimatorTable& table) {
  if (table.trials < 1 || table.rows.size() != static_cast<std::size_t>(table.trials) + 1) {
    throw std::invalid_argument("estimator table must have N + 1 rows");
  }
  for (const auto& row : table.rows) {
    if (row.size() != 2) throw std::invalid_argument("binomial risk needs K = 2 estimates");
  }
}

double binary_risk(double p0, const EstimatorTable& table, LossKind loss) {
  const int big_n = table.trials;
  double risk = 0.0;
  double total = 0.0;
  for (int n = 0; n <= big_n; ++n) {
    const double w = binomial_pmf(big_n, n, p0);
    if (w == 0.0) continue;
    total += w;
    const auto& q = table.rows[static_cast<std::size_t>(n)];
    const double b = std::min(1.0, std::sqrt(p0 * q[0]) + std::sqrt((1.0 - p0) * q[1]));
    risk += w * loss_from_coefficient(loss, b);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw NumericError("pointwise_risk: binomial weights sum to " + std::to_string(total) +
                       " at p0=" + std::to_string(p0));
  }
  return std::clamp(risk, 0.0, 1.0);
}

}  // namespace

double pointwise_risk(double p0, const EstimatorTable& table, LossKind loss) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 outside [0, 1]");
  require_binary_table(table);
  return binary_risk(p0, table, loss);
}

double posterior_risk(const Posterior& post, const ProbVector& estimate, LossKind loss) {
  if (dimension(post) != estimate.size()) {
    throw std::invalid_argument("posterior_risk: dimension mismatch");
  }
  const auto root = elementwise_sqrt(estimate);
  double fidelity = 0.0;
  if (loss == LossKind::OneMinusBSquared) {
    fidelity = moment_matrix(post).quadratic_form(root);
  } else {
    const auto v = sqrt_moment_vector(post);
    fidelity = std::inner_product(v.begin(), v.end(), root.begin(), 0.0);
  }
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

double bayes_risk(double prior_beta, const EstimatorTable& table, LossKind loss) {
  require_binary_table(table);
  double risk = 0.0;
  for (int n = 0; n <= table.trials; ++n) {
    risk += beta_binomial_pmf(table.trials, n, prior_beta) *
            posterior_risk(posterior_update(prior_beta, table.trials, n), table[n], loss);
  }
  return std::clamp(risk, 0.0, 1.0);
}

double bayes_risk(const DiscretePrior& prior, const EstimatorTable& table, LossKind loss) {
  require_binary_table(table);
  double risk = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (prior.weights()[m] == 0.0) continue;
    risk += prior.weights()[m] * binary_risk(prior.support()[m], table, loss);
  }
  return std::clamp(risk, 0.0, 1.0);
}

std::vector<RiskPeak> risk_peaks(const EstimatorTable& table, LossKind loss, const MaxRiskOptions& opts) {
  require_binary_table(table);
  if (opts.grid < 2) throw std::invalid_argument("max risk grid needs at least 2 points");
  if (opts.refine < 1) throw std::invalid_argument("max risk needs at least one refined peak");

  const int g = opts.grid;
  const double h = 1.0 / (g - 1);
  std::vector<double> grid(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) grid[i] = binary_risk(i == g - 1 ? 1.0 : i * h, table, loss);

  std::vector<int> local;
  for (int i = 0; i < g; ++i) {
    const bool left = i == 0 || grid[i] >= grid[i - 1];
    const bool right = i == g - 1 || grid[i] >= grid[i + 1];
    if (left && right) local.push_back(i);
  }
  std::stable_sort(local.begin(), local.end(), [&](int a, int b) { return grid[a] > grid[b]; });

  std::vector<RiskPeak> peaks;
  for (int i : local) {
    if (static_cast<int>(peaks.size()) == opts.refine) break;
    const double lo = std::max(0.0, (i - 1) * h);
    const double hi = std::min(1.0, (i + 1) * h);
    auto best = golden_section_maximize([&](double x) { return binary_risk(x, table, loss); }, lo, hi,
                                        opts.tol);
    RiskPeak peak{best.x, best.value};
    const double at_grid = i == g - 1 ? 1.0 : i * h;
    if (grid[i] >= peak.value) peak = {at_grid, grid[i]};
    const bool duplicate = std::any_of(peaks.begin(), peaks.end(), [&](const RiskPeak& p) {
      return std::abs(p.p0 - peak.p0) < 10.0 * opts.tol;
    });
    if (!duplicate) peaks.push_back(peak);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const RiskPeak& a, const RiskPeak& b) { return a.value > b.value; });
  return peaks;
}

RiskPeak max_risk(const EstimatorTable& table, LossKind loss, const MaxRiskOptions& opts) {
  return risk_peaks(table, loss, opts).front();
}

std::vector<std::pair<double, double>> risk_curve(const EstimatorTable& table, LossKind loss, int points) {
  require_binary_table(table);
  if (points < 2) throw std::invalid_argument("risk curve needs at least 2 points");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double p0 = i == points - 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    curve.emplace_back(p0, binary_risk(p0, table, loss));
  }
  return curve;
}

double relative_suboptimality(const Posterior& post, LossKind loss) {
  const double r_bayes = posterior_risk(post, bayes_estimate(loss, post), loss);
  const double r_mean = posterior_risk(post, posterior_mean(post), loss);
  if (r_bayes < 1e-14) throw NumericError("relative_suboptimality: undefined ratio (Bayes risk is zero)");
  return (r_mean - r_bayes) / r_bayes;
}

RiskReport max_risk_report(const EstimatorTable& table, LossKind loss, std::string estimator,
                           const MaxRiskOptions& opts) {
  const auto peak = max_risk(table, loss, opts);
  RiskReport report;
  report.loss = loss;
  report.estimator = std::move(estimator);
  report.trials = table.trials;
  report.value = peak.value;
  report.argmax_p = peak.p0;
  return report;
}

namespace {

double log_outcome_count(int trials, int categories) {
  // ln C(N + K - 1, K - 1)
  return std::lgamma(trials + categories) - std::lgamma(trials + 1.0) - std::lgamma(categories + 0.0);
}

double multinomial_log_pmf(std::span<const int> counts, const ProbVector& p) {
  int total = 0;
  double lp = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    lp -= std::lgamma(counts[k] + 1.0);
    if (counts[k] > 0) {
      if (p[k] == 0.0) return -HUGE_VAL;
      lp += counts[k] * std::log(p[k]);
    }
  }
  return lp + std::lgamma(total + 1.0);
}

}  // namespace

MultinomialRisk multinomial_pointwise_risk(const ProbVector& p, int trials, const CountEstimator& estimator,
                                           LossKind loss, std::uint64_t seed, std::uint64_t draws,
                                           std::uint64_t max_enumerated) {
  if (trials < 0) throw std::invalid_argument("multinomial risk: negative N");
  const int k = static_cast<int>(p.size());
  MultinomialRisk out;
  std::vector<int> counts(static_cast<std::size_t>(k), 0);

  if (log_outcome_count(trials, k) <= std::log(static_cast<double>(max_enumerated)) + 1e-9) {
    double total = 0.0;
    // Enumerate compositions of `trials` into k parts.
    std::function<void(int, int)> visit = [&](int index, int remaining) {
      if (index == k - 1) {
        counts[static_cast<std::size_t>(index)] = remaining;
        ++out.outcomes;
        const double lp = multinomial_log_pmf(counts, p);
        if (lp == -HUGE_VAL) return;
        const double w = std::exp(lp);
        total += w;
        out.value += w * bhattbayes::loss(loss, p, estimator(counts));
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        counts[static_cast<std::size_t>(index)] = c;
        visit(index + 1, remaining - c);
      }
    };
    visit(0, trials);
    if (std::abs(total - 1.0) > 1e-10) {
      throw NumericError("multinomial risk: outcome probabilities sum to " + std::to_string(total));
    }
    return out;
  }

  if (draws < 2) throw std::invalid_argument("multinomial risk: need at least 2 Monte-Carlo draws");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    int remaining = trials;
    double mass = 1.0;
    for (int j = 0; j < k - 1; ++j) {
      const double q = mass > 0.0 ? std::clamp(p[static_cast<std::size_t>(j)] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<int> bin(remaining, q);
      counts[static_cast<std::size_t>(j)] = remaining > 0 ? bin(rng) : 0;
      remaining -= counts[static_cast<std::size_t>(j)];
      mass -= p[static_cast<std::size_t>(j)];
    }
    counts[static_cast<std::size_t>(k - 1)] = remaining;
    const double x = bhattbayes::loss(loss, p, estimator(counts));
    const double delta = x - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (x - mean);
  }
  out.exact = false;
  out.outcomes = draws;
  out.value = mean;
  out.standard_error = std::sqrt(m2 / static_cast<double>(draws - 1) / static_cast<double>(draws));
  return out;
}

}  // namespace bhattbayes
