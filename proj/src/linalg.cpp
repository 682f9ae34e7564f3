#include "bhattbayes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bhattbayes/errors.hpp"

namespace bhattbayes {

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double SquareMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SquareMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double SquareMatrix::max_asymmetry() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

std::vector<double> SquareMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
  return y;
}

double SquareMatrix::quadratic_form(std::span<const double> x) const {
  const auto y = multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * y[i];
  return s;
}

std::vector<std::vector<double>> SquareMatrix::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

namespace {

double off_diagonal_mass(const SquareMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const SquareMatrix& input, int max_sweeps) {
  const std::size_t n = input.size();
  if (n == 0) throw std::invalid_argument("jacobi_eigen: empty matrix");
  const double scale = std::max(1.0, input.frobenius_norm());
  if (input.max_asymmetry() > 1e-10 * scale) {
    throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");
  }

  SquareMatrix a = input;
  // Symmetrize exactly; the rotations below assume a(i,j) == a(j,i).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  SquareMatrix v = SquareMatrix::identity(n);

  const double threshold = 1e-14 * scale;
  int sweep = 0;
  while (off_diagonal_mass(a) >= threshold) {
    if (sweep == max_sweeps) {
      throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps, off-diagonal mass " + std::to_string(off_diagonal_mass(a)));
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(k, k);
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v(i, k);
  }
  return out;
}

namespace {

void orient(std::vector<double>& x) {
  const auto it = std::max_element(x.begin(), x.end(),
                                   [](double l, double r) { return std::abs(l) < std::abs(r); });
  if (*it < 0.0)
    for (double& e : x) e = -e;
}

double negative_mass(const std::vector<double>& x) {
  double s = 0.0;
  for (double e : x) s += std::max(0.0, -e);
  return s;
}

}  // namespace

EigenPair top_eigenpair(const SquareMatrix& m) {
  for (double x : m.data()) {
    if (!std::isfinite(x)) throw std::invalid_argument("top_eigenpair: non-finite entry");
    if (x < 0.0) throw std::invalid_argument("top_eigenpair: matrix has negative entries");
  }
  SymmetricEigen eig = jacobi_eigen(m);
  const double top = *std::max_element(eig.values.begin(), eig.values.end());

  std::size_t best = eig.values.size();
  double best_neg = 0.0;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (top - eig.values[k] >= 1e-12) continue;
    orient(eig.vectors[k]);
    const double neg = negative_mass(eig.vectors[k]);
    if (best == eig.values.size() || neg < best_neg - 1e-12) {
      best = k;
      best_neg = neg;
    }
  }

  EigenPair out;
  out.value = eig.values[best];
  out.vector = std::move(eig.vectors[best]);
  out.sweeps = eig.sweeps;
  for (double& e : out.vector)
    if (e < 0.0 && e > -1e-12) e = 0.0;
  return out;
}

}  // namespace bhattbayes
