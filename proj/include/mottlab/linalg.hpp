#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mottlab {

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  DenseMatrix transposed() const;
  double trace() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Largest |a(i,j) - b(i,j)|; shapes must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k belongs to values[k]; empty if not requested
};

/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson shifts. Only the lower triangle of `a` is read.
SymmetricEigen symmetric_eigen(const DenseMatrix& a, bool want_vectors = true);

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and sub-diagonal `offdiag` (offdiag.size() == diag.size() - 1).
SymmetricEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag,
                                 bool want_vectors = true);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);

}  // namespace mottlab
