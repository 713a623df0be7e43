// Dense linear algebra for the small symmetric blocks that appear on
// Laplacian eigenspaces: isometry pull-back actions, their symmetrized
// perturbations, and the log-determinants of those blocks.
#pragma once

#include <cstddef>
#include <vector>

namespace mtorus {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Matrix transpose(const Matrix& a);
Matrix kronecker(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& a);
// max-norm of A^T A - I; zero for orthogonal A
double orthogonality_defect(const Matrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(Matrix a);

// log det of a symmetric positive definite matrix via Cholesky.
// Throws std::domain_error when a pivot fails.
double spd_logdet(Matrix a);

// Determinant of a small square matrix (LU with partial pivoting).
double determinant(Matrix a);

// Solve a x = rhs in place (LU with partial pivoting).
std::vector<double> lu_solve(Matrix a, std::vector<double> rhs);

}  // namespace mtorus
