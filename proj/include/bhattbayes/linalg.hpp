#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bhattbayes {

/// Dense row-major square matrix. Only what the small eigenproblems here
/// need.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  /// Row-major entries; size must be a perfect square.
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SquareMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  double max_asymmetry() const noexcept;
  std::vector<double> multiply(std::span<const double> x) const;
  /// x^T A x
  double quadratic_form(std::span<const double> x) const;
  std::vector<std::vector<double>> rows() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;                // unsorted, as produced by the sweeps
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-14 * max(1, ||A||_F); throws ConvergenceError after max_sweeps.
SymmetricEigen jacobi_eigen(const SquareMatrix& a, int max_sweeps = 100);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, entries >= 0
  int sweeps = 0;
};

/// Maximal eigenvalue of a symmetric entrywise-nonnegative matrix with its
/// nonnegative (Perron) unit eigenvector.
///
/// Sign convention: the largest-magnitude entry is made positive. When the
/// top eigenvalue is degenerate (gap < 1e-12) the basis vector of that
/// eigenspace with the smallest negative mass is returned, ties to the
/// lowest index. Entries in (-1e-12, 0) are then clamped to zero.
EigenPair top_eigenpair(const SquareMatrix& m);

}  // namespace bhattbayes
