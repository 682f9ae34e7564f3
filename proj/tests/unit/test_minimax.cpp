#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bhattbayes/minimax.hpp"
#include "bhattbayes/risk.hpp"

using namespace bhattbayes;

namespace {

// Symmetric-difference check: every support point has a mirror of equal weight.
bool mirror_symmetric(const DiscretePrior& prior, double tol) {
  const auto& s = prior.support();
  const auto& w = prior.weights();
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (std::abs(s[i] - (1 - s[j])) <= tol && std::abs(w[i] - w[j]) <= tol) found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("minimax") {
  TEST_CASE("discrete prior validation") {
    CHECK_THROWS_AS(DiscretePrior({0.2, 1.2}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({0.2, 0.4}, {0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({}, {}), std::invalid_argument);
    KempthorneConfig bad;
    bad.alpha_mix = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("Bayes table for discrete priors") {
    const auto point = bayes_estimator_for_discrete_prior(DiscretePrior::point_mass(0.3), 6, LossKind::OneMinusBSquared);
    for (const auto& row : point.rows) CHECK(row[0] == doctest::Approx(0.3).epsilon(1e-12));

    const auto corners = bayes_estimator_for_discrete_prior(DiscretePrior({0.0, 1.0}, {0.5, 0.5}), 1,
                                                            LossKind::OneMinusB);
    CHECK(corners[0].vector() == std::vector<double>{0.0, 1.0});
    CHECK(corners[1].vector() == std::vector<double>{1.0, 0.0});

    // n=1 is impossible under a point mass at 0; the row falls back to the prior mean.
    const auto zero = bayes_estimator_for_discrete_prior(DiscretePrior::point_mass(0.0), 2, LossKind::OneMinusBSquared);
    for (const auto& row : zero.rows) CHECK(row[0] == 0.0);
  }

  TEST_CASE("closed-form objective equals the explicit Bayes risk") {
    const std::vector<DiscretePrior> priors{
        DiscretePrior::point_mass(0.4), DiscretePrior({0.0, 1.0}, {0.5, 0.5}),
        DiscretePrior({0.1, 0.45, 0.8}, {0.2, 0.5, 0.3}), DiscretePrior({0.0, 0.3, 0.7, 1.0}, {0.1, 0.4, 0.4, 0.1})};
    for (const auto& prior : priors) {
      for (int big_n : {1, 3, 10}) {
        for (auto loss : {LossKind::OneMinusB, LossKind::OneMinusBSquared}) {
          const auto table = bayes_estimator_for_discrete_prior(prior, big_n, loss);
          CHECK(bayes_risk_of_bayes_estimator(prior, big_n, loss) ==
                doctest::Approx(bayes_risk(prior, table, loss)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("consolidate_prior merges and prunes") {
    const DiscretePrior p({0.2, 0.20005, 0.7, 0.9}, {0.3, 0.3, 0.4 - 1e-12, 1e-12});
    const auto c = consolidate_prior(p, 1e-4, 1e-9);
    REQUIRE(c.size() == 2);
    CHECK(c.support()[0] == doctest::Approx(0.200025));
    CHECK(c.weights()[0] == doctest::Approx(0.6));
    CHECK(c.support()[1] == doctest::Approx(0.7));
    double total = c.weights()[0] + c.weights()[1];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("beta scan") {
    BetaScanOptions opts;
    opts.trials = 10;
    opts.step = 0.02;
    const auto r = beta_scan(opts);
    CHECK(r.beta_star > 0.40);
    CHECK(r.beta_star < 0.48);
    REQUIRE(!r.curve.empty());
    CHECK(r.curve.front().beta == doctest::Approx(0.05));
    for (const auto& pt : r.curve) CHECK(r.max_risk_star <= pt.max_risk + 1e-12);
    CHECK(r.max_risk_star == doctest::Approx(conjugate_max_risk(10, opts.loss, opts.family, r.beta_star)).epsilon(1e-12));

    BetaScanOptions bad;
    bad.beta_min = 0.0;
    CHECK_THROWS_AS(beta_scan(bad), std::invalid_argument);
    bad = {};
    bad.family = EstimatorKind::MLE;
    CHECK_THROWS_AS(beta_scan(bad), std::invalid_argument);
  }

  TEST_CASE("Kempthorne at N=1") {
    KempthorneConfig cfg;
    cfg.trials = 1;
    const auto r = kempthorne(cfg, default_initial_prior(1, cfg.loss));
    CHECK(r.converged);
    CHECK(r.diff <= cfg.tol);
    CHECK(r.avg_risk <= r.max_risk + 1e-9);
    BetaScanOptions scan;
    scan.trials = 1;
    CHECK(r.max_risk <= beta_scan(scan).max_risk_star + cfg.tol * r.avg_risk);
    CHECK(mirror_symmetric(r.prior, 1e-3));
  }

  TEST_CASE("Kempthorne from a single point at N=2") {
    KempthorneConfig cfg;
    cfg.trials = 2;
    const auto r = kempthorne(cfg, DiscretePrior::point_mass(0.5));
    CHECK(r.converged);
    CHECK(r.prior.size() > 1);
    CHECK(mirror_symmetric(r.prior, 1e-3));
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      CHECK(r.history[i].avg_risk >= r.history[i - 1].avg_risk - 1e-6);
    }
    for (const auto& h : r.history) CHECK(h.avg_risk <= h.max_risk + 1e-9);
  }

  TEST_CASE("Kempthorne with a loose tolerance stops after one iteration") {
    KempthorneConfig cfg;
    cfg.trials = 5;
    cfg.tol = 0.5;
    // Same support size as the least favorable prior; the two-point default
    // start needs several iterations here.
    const auto r = kempthorne(cfg, DiscretePrior({0.0, 0.3, 0.7, 1.0}, {0.15, 0.35, 0.35, 0.15}));
    CHECK(r.converged);
    CHECK(r.outer_iters == 1);
  }

  TEST_CASE("Kempthorne reports non-convergence at the iteration cap") {
    KempthorneConfig cfg;
    cfg.trials = 10;
    cfg.tol = 1e-9;
    cfg.max_outer_iters = 2;
    const auto r = kempthorne(cfg, DiscretePrior::point_mass(0.5));
    CHECK_FALSE(r.converged);
    CHECK(r.outer_iters == 2);
    CHECK(r.avg_risk <= r.max_risk + 1e-9);
  }

  TEST_CASE("Kempthorne under 1-B") {
    KempthorneConfig cfg;
    cfg.trials = 3;
    cfg.loss = LossKind::OneMinusB;
    const auto r = kempthorne(cfg, default_initial_prior(3, cfg.loss));
    CHECK(r.converged);
    CHECK(r.avg_risk <= r.max_risk + 1e-9);
    CHECK(r.avg_risk == doctest::Approx(bayes_risk(r.prior, r.estimator, cfg.loss)).epsilon(1e-9));
  }
}
