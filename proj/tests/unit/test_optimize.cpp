#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bhattbayes/optimize.hpp"

using namespace bhattbayes;

TEST_SUITE("optimize") {
  TEST_CASE("golden section on a parabola") {
    const auto mx = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10);
    CHECK(mx.x == doctest::Approx(0.3).epsilon(1e-8));
    const auto mn = golden_section_minimize([](double x) { return std::cos(x); }, 2.0, 4.0, 1e-10);
    CHECK(mn.x == doctest::Approx(std::numbers::pi).epsilon(1e-8));
    CHECK(mn.value == doctest::Approx(-1.0));
  }

  TEST_CASE("golden section keeps the endpoint optimum") {
    const auto mx = golden_section_maximize([](double x) { return x; }, 0.0, 2.0, 1e-9);
    CHECK(mx.x == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("Nelder-Mead on Rosenbrock") {
    auto rosen = [](std::span<const double> x) {
      return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions opts;
    opts.diameter_tol = 1e-10;
    const auto r = nelder_mead_minimize(rosen, {-1.2, 1.0}, opts);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.value < 1e-8);
  }

  TEST_CASE("Nelder-Mead on a quadratic bowl in five dimensions") {
    auto bowl = [](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.1 * i) * (x[i] - 0.1 * i);
      return s;
    };
    NelderMeadOptions opts;
    opts.diameter_tol = 1e-9;
    const auto r = nelder_mead_minimize(bowl, std::vector<double>(5, 1.0), opts);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r.x[i] - 0.1 * i) < 1e-5);
  }

  TEST_CASE("Nelder-Mead reports the evaluation cap") {
    NelderMeadOptions opts;
    opts.max_evaluations = 10;
    const auto r = nelder_mead_minimize([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; },
                                        {3.0, -2.0}, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 12);
  }
}
