#include "polyproj/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "polyproj/error.hpp"

namespace polyproj {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

PivotedLu::PivotedLu(DenseMatrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw DimensionMismatch("LU factorization needs a square matrix");
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(lu_(r, k)) > best) {
        best = std::abs(lu_(r, k));
        pivot = r;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      det_ = 0.0;
      continue;
    }
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(pivot, c));
      std::swap(perm_[k], perm_[pivot]);
      det_ = -det_;
    }
    const double p = lu_(k, k);
    det_ *= p;
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = lu_(r, k) / p;
      lu_(r, k) = f;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
    }
  }
  if (singular_) det_ = 0.0;
}

double PivotedLu::pivot_ratio() const noexcept {
  if (singular_) return std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    const double p = std::abs(lu_(k, k));
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return size() == 0 ? 1.0 : hi / lo;
}

std::vector<double> PivotedLu::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionMismatch("LU solve: right-hand side has wrong size");
  if (singular_) throw SingularSystem("LU solve on a singular matrix");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

std::vector<double> PivotedLu::solve_transposed(std::span<const double> b) const {
  // A^T = U^T L^T P, so solve U^T y = b, L^T z = y, x = P^T z.
  const std::size_t n = size();
  if (b.size() != n) throw DimensionMismatch("LU solve: right-hand side has wrong size");
  if (singular_) throw SingularSystem("LU solve on a singular matrix");
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) y[i] -= lu_(j, i) * y[j];
    y[i] /= lu_(i, i);
  }
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu_(j, i) * y[j];
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = y[i];
  return x;
}

double determinant(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  if (a.rows() == 1) return a(0, 0);
  return PivotedLu(a).determinant();
}

DenseMatrix submatrix(const DenseMatrix& a, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols) {
  DenseMatrix s(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) s(r, c) = a(rows[r], cols[c]);
  return s;
}

}  // namespace polyproj
