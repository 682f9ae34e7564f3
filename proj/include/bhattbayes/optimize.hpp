#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bhattbayes {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi], stopping once the
/// bracket is narrower than tol. Assumes f is unimodal on the bracket.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol);

ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol);

struct NelderMeadOptions {
  double initial_step = 0.5;
  double diameter_tol = 1e-6;  // stop when every vertex is this close to the best
  int max_evaluations = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the Nelder-Mead simplex method (standard coefficients:
/// reflection 1, expansion 2, contraction 1/2, shrink 1/2).
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start, const NelderMeadOptions& opts = {});

}  // namespace bhattbayes
