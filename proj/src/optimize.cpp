#include "bhattbayes/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bhattbayes {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  ScalarOptimum best{x, f(x)};
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol) {
  auto best = golden_section_maximize([&](double x) { return -f(x); }, lo, hi, tol);
  best.value = -best.value;
  return best;
}

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start, const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead_minimize: empty start point");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += opts.initial_step;
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  std::vector<double> trial2(dim);

  auto point_along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t k = 0; k < dim; ++k) out[k] = centroid[k] + t * (worst[k] - centroid[k]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
      }
    }
    if (diameter < opts.diameter_tol) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= opts.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }

    point_along(-1.0, trial, simplex[worst]);
    const double f_reflect = eval(trial);
    if (f_reflect < values[best]) {
      point_along(-2.0, trial2, simplex[worst]);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
      continue;
    }
    if (f_reflect < values[worst]) {
      point_along(-0.5, trial2, simplex[worst]);
      const double f_contract = eval(trial2);
      if (f_contract <= f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_contract;
        continue;
      }
    } else {
      point_along(0.5, trial2, simplex[worst]);
      const double f_contract = eval(trial2);
      if (f_contract < values[worst]) {
        simplex[worst] = trial2;
        values[worst] = f_contract;
        continue;
      }
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < dim; ++k) {
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  result.value = *best_it;
  return result;
}

}  // namespace bhattbayes
