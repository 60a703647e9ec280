#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qtr {

// Dense row-major matrix of doubles. Sized for the few-dozen-dimensional
// problems in this project; no expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double> column(std::size_t j) const;

  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  double frobenius_norm() const;
  double trace() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
Matrix operator*(double s, Matrix a);
Matrix operator+(Matrix a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// Eigen-decomposition of a real symmetric matrix. Eigenvalues ascending;
// column k of `vectors` is the unit eigenvector for values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// rel_tol times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(Matrix a, double rel_tol = 1e-14, int max_sweeps = 100);

// Lower-triangular Cholesky factor, or nullopt when a pivot is not positive.
std::optional<Matrix> cholesky(const Matrix& a);
std::vector<double> cholesky_solve(const Matrix& factor, std::span<const double> b);

// Moore-Penrose inverse of a symmetric positive semidefinite matrix.
// Eigenvalues below rel_cutoff * max are dropped; their eigenvectors are
// returned in `null_space` (one per column).
struct PseudoInverse {
  Matrix inverse;
  Matrix null_space;
};
PseudoInverse symmetric_pseudo_inverse(const Matrix& a, double rel_cutoff = 1e-12);

}  // namespace qtr
