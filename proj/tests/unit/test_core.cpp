#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bhattbayes/core.hpp"
#include "../oracles.hpp"

using namespace bhattbayes;

namespace {

ProbVector random_simplex(std::mt19937_64& rng, std::size_t k) {
  return ProbVector(oracle::dirichlet_draw(rng, std::vector<double>(k, 1.0)));
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("ProbVector clamps round-off and rejects real violations") {
    ProbVector p({0.5 + 1e-10, 0.5, -1e-13});
    CHECK(p[2] == 0.0);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(ProbVector({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({1.1, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({NAN, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector::binary(1.5), std::invalid_argument);
  }

  TEST_CASE("bhattacharyya examples") {
    CHECK(bhattacharyya(ProbVector({0.5, 0.5}), ProbVector({0.5, 0.5})) == doctest::Approx(1.0));
    CHECK(bhattacharyya(ProbVector({1, 0}), ProbVector({0, 1})) == 0.0);
    const double b = bhattacharyya(ProbVector({0.25, 0.75}), ProbVector({0.75, 0.25}));
    CHECK(b == doctest::Approx(2.0 * std::sqrt(0.1875)).epsilon(1e-15));
    CHECK(b == doctest::Approx(0.8660254037844386).epsilon(1e-15));
    CHECK_THROWS_AS(bhattacharyya(ProbVector({0.5, 0.5}), ProbVector({0.2, 0.3, 0.5})), std::invalid_argument);
  }

  TEST_CASE("bhattacharyya agrees with a fine grid of the same pair") {
    // Split each outcome into 32 equal sub-outcomes; B is invariant under
    // such refinement, so the 64-point sum must reproduce the 2-point one.
    double grid = 0.0;
    for (int i = 0; i < 32; ++i) grid += std::sqrt((0.25 / 32) * (0.75 / 32));
    for (int i = 0; i < 32; ++i) grid += std::sqrt((0.75 / 32) * (0.25 / 32));
    CHECK(bhattacharyya(ProbVector({0.25, 0.75}), ProbVector({0.75, 0.25})) == doctest::Approx(grid).epsilon(1e-14));
  }

  TEST_CASE("loss examples") {
    const ProbVector p({0.25, 0.75}), q({0.75, 0.25});
    CHECK(loss(LossKind::OneMinusB, p, p) == doctest::Approx(0.0));
    CHECK(loss(LossKind::OneMinusBSquared, ProbVector({1, 0}), ProbVector({0, 1})) == 1.0);
    CHECK(loss(LossKind::OneMinusBSquared, p, q) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(parse_loss_kind("b") == LossKind::OneMinusB);
    CHECK(parse_loss_kind("b2") == LossKind::OneMinusBSquared);
    CHECK_THROWS_AS(parse_loss_kind("kl"), std::invalid_argument);
  }

  TEST_CASE("properties on random simplex pairs") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t k = 2 + trial % 6;
      const auto p = random_simplex(rng, k);
      const auto q = random_simplex(rng, k);
      const double b = bhattacharyya(p, q);
      REQUIRE(b >= 0.0);
      REQUIRE(b <= 1.0);
      REQUIRE(b == bhattacharyya(q, p));
      REQUIRE(std::abs(loss(LossKind::OneMinusB, p, p)) <= 1e-12);
      REQUIRE(std::abs(loss(LossKind::OneMinusBSquared, p, p)) <= 1e-12);
      const double l1 = loss(LossKind::OneMinusB, p, q);
      const double l2 = loss(LossKind::OneMinusBSquared, p, q);
      REQUIRE(std::abs(l2 - (1 - b) * (1 + b)) <= 1e-12);
      REQUIRE(l2 <= 2 * l1 + 1e-15);
    }
  }

  TEST_CASE("boundary points have no NaN path") {
    const ProbVector corner({0.0, 0.0, 1.0});
    const ProbVector mid({0.2, 0.3, 0.5});
    CHECK(std::isfinite(bhattacharyya(corner, mid)));
    CHECK(bhattacharyya(corner, mid) == doctest::Approx(std::sqrt(0.5)));
    const auto roots = elementwise_sqrt(corner);
    CHECK(roots[0] == 0.0);
    CHECK(roots[2] == 1.0);
  }
}
