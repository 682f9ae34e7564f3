#include "bhattbayes/posterior.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bhattbayes {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ln Gamma(x + 1/2) - ln Gamma(x). For large x the difference of two
// lgamma values loses digits to cancellation, so use the asymptotic series
// (Bernoulli polynomials at 1/2); the first omitted term is below 1e-15
// for x >= 30.
double log_half_step(double x) {
  if (x < 30.0) return std::lgamma(x + 0.5) - std::lgamma(x);
  const double r = 1.0 / x;
  const double r2 = r * r;
  return 0.5 * std::log(x) +
         r * (-1.0 / 8.0 + r2 * (1.0 / 192.0 + r2 * (-1.0 / 640.0 + r2 * (17.0 / 14336.0))));
}

}  // namespace

DirichletPosterior::DirichletPosterior(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) throw std::invalid_argument("Dirichlet posterior needs K >= 2");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("Dirichlet parameter must be positive and finite, got " +
                                  std::to_string(a));
    }
  }
}

double DirichletPosterior::concentration() const noexcept {
  return std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

ParticlePosterior::ParticlePosterior(std::vector<ProbVector> points, std::vector<double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > ProbVector::kSumTolerance) {
    throw std::invalid_argument("particle weights sum to " + std::to_string(sum));
  }
  *this = from_unnormalized(std::move(points), std::move(weights));
}

ParticlePosterior ParticlePosterior::from_unnormalized(std::vector<ProbVector> points,
                                                       std::vector<double> weights) {
  if (points.empty()) throw std::invalid_argument("particle posterior needs at least one point");
  if (points.size() != weights.size()) {
    throw std::invalid_argument("particle posterior: " + std::to_string(points.size()) +
                                " points but " + std::to_string(weights.size()) + " weights");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw std::invalid_argument("particle posterior: points differ in dimension");
    }
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("particle weight must be nonnegative, got " + std::to_string(w));
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("particle weights are all zero");
  for (double& w : weights) w /= sum;

  ParticlePosterior out;
  out.points_ = std::move(points);
  out.weights_ = std::move(weights);
  return out;
}

ParticlePosterior ParticlePosterior::point_mass(ProbVector p) {
  return ParticlePosterior({std::move(p)}, {1.0});
}

std::size_t dimension(const Posterior& post) {
  return std::visit([](const auto& p) { return p.dimension(); }, post);
}

std::vector<double> sqrt_moment_vector(const Posterior& post) {
  return std::visit(
      overloaded{
          [](const DirichletPosterior& d) {
            const auto& alpha = d.alpha();
            const double a0 = d.concentration();
            const double tail = -log_half_step(a0);
            std::vector<double> out(alpha.size());
            for (std::size_t k = 0; k < alpha.size(); ++k) {
              out[k] = std::exp(log_half_step(alpha[k]) + tail);
            }
            return out;
          },
          [](const ParticlePosterior& pp) {
            std::vector<double> out(pp.dimension(), 0.0);
            for (std::size_t m = 0; m < pp.count(); ++m) {
              const auto& x = pp.points()[m];
              for (std::size_t k = 0; k < out.size(); ++k) out[k] += pp.weights()[m] * std::sqrt(x[k]);
            }
            return out;
          },
      },
      post);
}

SquareMatrix moment_matrix(const Posterior& post) {
  return std::visit(
      overloaded{
          [](const DirichletPosterior& d) {
            const auto& alpha = d.alpha();
            const std::size_t k = alpha.size();
            const double a0 = d.concentration();
            // ln Gamma(a0) - ln Gamma(a0 + 1) = -ln a0
            const double tail = -std::log(a0);
            std::vector<double> half(k);
            for (std::size_t i = 0; i < k; ++i) half[i] = log_half_step(alpha[i]);
            SquareMatrix m(k);
            for (std::size_t i = 0; i < k; ++i) {
              m(i, i) = alpha[i] / a0;
              for (std::size_t j = i + 1; j < k; ++j) {
                m(i, j) = m(j, i) = std::exp(half[i] + half[j] + tail);
              }
            }
            return m;
          },
          [](const ParticlePosterior& pp) {
            const std::size_t k = pp.dimension();
            SquareMatrix m(k);
            std::vector<double> root(k);
            for (std::size_t n = 0; n < pp.count(); ++n) {
              const double w = pp.weights()[n];
              const auto& x = pp.points()[n];
              for (std::size_t i = 0; i < k; ++i) root[i] = std::sqrt(x[i]);
              for (std::size_t i = 0; i < k; ++i) {
                m(i, i) += w * x[i];
                for (std::size_t j = i + 1; j < k; ++j) m(i, j) += w * root[i] * root[j];
              }
            }
            for (std::size_t i = 0; i < k; ++i)
              for (std::size_t j = i + 1; j < k; ++j) m(j, i) = m(i, j);
            return m;
          },
      },
      post);
}

ProbVector posterior_mean(const Posterior& post) {
  return std::visit(
      overloaded{
          [](const DirichletPosterior& d) {
            std::vector<double> mean = d.alpha();
            const double a0 = d.concentration();
            for (double& x : mean) x /= a0;
            return ProbVector(std::move(mean));
          },
          [](const ParticlePosterior& pp) {
            std::vector<double> mean(pp.dimension(), 0.0);
            for (std::size_t m = 0; m < pp.count(); ++m)
              for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += pp.weights()[m] * pp.points()[m][k];
            return ProbVector(std::move(mean));
          },
      },
      post);
}

DirichletPosterior posterior_update(double prior_beta, int trials, int successes) {
  if (successes < 0 || trials < 0 || successes > trials) {
    throw std::invalid_argument("posterior_update: need 0 <= n <= N, got n=" +
                                std::to_string(successes) + " N=" + std::to_string(trials));
  }
  const int counts[2] = {successes, trials - successes};
  return posterior_update(prior_beta, counts);
}

DirichletPosterior posterior_update(double prior_beta, std::span<const int> counts) {
  if (!(prior_beta > 0.0)) {
    throw std::invalid_argument("prior beta must be positive, got " + std::to_string(prior_beta));
  }
  std::vector<double> alpha(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0) throw std::invalid_argument("negative category count");
    alpha[k] = counts[k] + prior_beta;
  }
  return DirichletPosterior(std::move(alpha));
}

DirichletSampler::DirichletSampler(const DirichletPosterior& post) {
  gammas_.reserve(post.dimension());
  for (double a : post.alpha()) gammas_.emplace_back(a, 1.0);
}

void DirichletSampler::draw(std::mt19937_64& rng, std::span<double> out) {
  if (out.size() != gammas_.size()) throw std::invalid_argument("DirichletSampler: bad output size");
  double sum = 0.0;
  // Small shape parameters can underflow every component; redraw then.
  do {
    sum = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = gammas_[k](rng);
      sum += out[k];
    }
  } while (!(sum > 0.0));
  for (double& x : out) x /= sum;
}

ParticlePosterior sample_particles(const DirichletPosterior& post, std::size_t count,
                                   std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_particles: count must be positive");
  std::mt19937_64 rng(seed);
  DirichletSampler sampler(post);
  std::vector<ProbVector> points;
  points.reserve(count);
  std::vector<double> draw(post.dimension());
  for (std::size_t i = 0; i < count; ++i) {
    sampler.draw(rng, draw);
    points.emplace_back(draw);
  }
  return ParticlePosterior::from_unnormalized(std::move(points), std::vector<double>(count, 1.0));
}

}  // namespace bhattbayes
