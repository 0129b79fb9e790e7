#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace textlier::linalg {

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular L with L * L^T = a. Throws NumericalError if `a` is not
/// symmetric positive definite.
Matrix cholesky(const Matrix& a);

/// Solves L * L^T x = b given the Cholesky factor L.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

struct SymmetricEigen {
  std::vector<double> values;  // non-increasing
  Matrix vectors;              // row i is the unit eigenvector of values[i]
  std::size_t sweeps = 0;
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations. Stops
/// once the off-diagonal Frobenius norm falls below tolerance * max(1, ||a||_F);
/// throws NumericalError after max_sweeps without convergence.
SymmetricEigen jacobi_eigen(const Matrix& a, double tolerance = 1e-10,
                            std::size_t max_sweeps = 100);

/// Column means of `vectors` (each of equal length d).
std::vector<double> mean_of(std::span<const std::vector<double>> vectors);
/// Biased (1/N) sample covariance around `mean`.
Matrix covariance_of(std::span<const std::vector<double>> vectors, std::span<const double> mean);

}  // namespace textlier::linalg
