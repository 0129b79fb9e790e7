#include "textlier/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "textlier/error.hpp"

namespace textlier::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("cholesky: matrix is not square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw NumericalError("cholesky: matrix is not positive definite (pivot " +
                           std::to_string(j) + ")");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw ShapeError("cholesky_solve: right-hand side has wrong length");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lower(k, i) * x[k];
    x[i] = s / lower(i, i);
  }
  return x;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double tolerance, std::size_t max_sweeps) {
  if (input.rows() != input.cols()) throw ShapeError("jacobi_eigen: matrix is not square");
  const std::size_t n = input.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(input(i, j))) throw NumericalError("jacobi_eigen: non-finite entry");
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * (1.0 + std::abs(input(i, j))))
        throw ArgumentError("jacobi_eigen: matrix is not symmetric");
    }

  Matrix a = input;
  Matrix v = Matrix::identity(n);  // columns accumulate eigenvectors
  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  const double threshold = tolerance * std::max(1.0, std::sqrt(frob));

  SymmetricEigen result;
  while (off_diagonal_norm(a) >= threshold) {
    if (result.sweeps == max_sweeps)
      throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");
    ++result.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p, q); t is the smaller root for stability.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  result.values.resize(n);
  result.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    result.values[r] = a(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) result.vectors(r, k) = v(k, order[r]);
  }
  return result;
}

std::vector<double> mean_of(std::span<const std::vector<double>> vectors) {
  if (vectors.empty()) throw ArgumentError("mean_of: no vectors");
  const std::size_t d = vectors.front().size();
  std::vector<double> mean(d, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != d) throw ShapeError("mean_of: vectors have different lengths");
    for (std::size_t i = 0; i < d; ++i) mean[i] += v[i];
  }
  for (double& m : mean) m /= static_cast<double>(vectors.size());
  return mean;
}

Matrix covariance_of(std::span<const std::vector<double>> vectors, std::span<const double> mean) {
  const std::size_t d = mean.size();
  Matrix cov(d, d);
  std::vector<double> diff(d);
  for (const auto& v : vectors) {
    if (v.size() != d) throw ShapeError("covariance_of: vectors have different lengths");
    for (std::size_t i = 0; i < d; ++i) diff[i] = v[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) cov(i, j) += diff[i] * diff[j];
  }
  const auto n = static_cast<double>(vectors.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= n;
      cov(j, i) = cov(i, j);
    }
  return cov;
}

}  // namespace textlier::linalg
