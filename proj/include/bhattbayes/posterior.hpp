#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "bhattbayes/core.hpp"
#include "bhattbayes/linalg.hpp"

namespace bhattbayes {

/// Dirichlet(alpha) posterior; for K = 2 this is Beta(alpha_0, alpha_1) on p_0.
class DirichletPosterior {
 public:
  explicit DirichletPosterior(std::vector<double> alpha);

  std::size_t dimension() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double concentration() const noexcept;

 private:
  std::vector<double> alpha_;
};

/// Weighted point cloud on the simplex. Covers non-conjugate models and
/// discrete priors.
class ParticlePosterior {
 public:
  /// Weights must already sum to one within 1e-9.
  ParticlePosterior(std::vector<ProbVector> points, std::vector<double> weights);
  /// Accepts any nonnegative weights with a positive sum and normalizes them.
  static ParticlePosterior from_unnormalized(std::vector<ProbVector> points,
                                             std::vector<double> weights);
  static ParticlePosterior point_mass(ProbVector p);

  std::size_t dimension() const noexcept { return points_.front().size(); }
  std::size_t count() const noexcept { return points_.size(); }
  const std::vector<ProbVector>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  ParticlePosterior() = default;
  std::vector<ProbVector> points_;
  std::vector<double> weights_;
};

using Posterior = std::variant<DirichletPosterior, ParticlePosterior>;

std::size_t dimension(const Posterior& post);

/// E[sqrt(p_k)] for each k.
std::vector<double> sqrt_moment_vector(const Posterior& post);

/// Matrix of E[sqrt(p_i p_j)]; symmetric, PSD, trace one.
SquareMatrix moment_matrix(const Posterior& post);

ProbVector posterior_mean(const Posterior& post);

/// Beta(beta, beta) prior updated with n successes out of N trials:
/// alpha = (n + beta, N - n + beta).
DirichletPosterior posterior_update(double prior_beta, int trials, int successes);

/// Symmetric Dirichlet(beta) prior updated with a vector of category counts.
DirichletPosterior posterior_update(double prior_beta, std::span<const int> counts);

/// Draws from Dirichlet(alpha) as normalized independent Gamma variates.
class DirichletSampler {
 public:
  explicit DirichletSampler(const DirichletPosterior& post);
  void draw(std::mt19937_64& rng, std::span<double> out);

 private:
  std::vector<std::gamma_distribution<double>> gammas_;
};

/// Monte-Carlo representation of a Dirichlet posterior with equal weights.
ParticlePosterior sample_particles(const DirichletPosterior& post, std::size_t count,
                                   std::uint64_t seed);

}  // namespace bhattbayes
