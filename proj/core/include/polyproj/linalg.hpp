#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polyproj {

/// Row-major dense matrix for the small systems that appear in support
/// enumeration (at most a few dozen rows).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  DenseMatrix transposed() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Gaussian elimination with partial (row) pivoting, P A = L U.
///
/// Exactly singular inputs (a zero pivot column) are representable: the
/// factorization then reports determinant 0 and refuses to solve.
class PivotedLu {
 public:
  explicit PivotedLu(DenseMatrix a);

  std::size_t size() const noexcept { return lu_.rows(); }
  double determinant() const noexcept { return det_; }
  bool exactly_singular() const noexcept { return singular_; }

  /// max |pivot| / min |pivot|; infinite when exactly singular.
  double pivot_ratio() const noexcept;

  /// Solves A x = b. Throws SingularSystem if exactly singular.
  std::vector<double> solve(std::span<const double> b) const;

  /// Solves A^T x = b. Throws SingularSystem if exactly singular.
  std::vector<double> solve_transposed(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  double det_ = 1.0;
  bool singular_ = false;
};

/// Determinant by pivoted elimination; the 1x1 case returns the entry itself.
double determinant(const DenseMatrix& a);

/// Rows and columns of `a` selected in the given order.
DenseMatrix submatrix(const DenseMatrix& a, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols);

}  // namespace polyproj
