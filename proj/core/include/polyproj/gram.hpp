#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "polyproj/core.hpp"
#include "polyproj/linalg.hpp"

namespace polyproj {

/// A strictly ascending set of 0-based halfspace indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::size_t> members);
  IndexSet(std::initializer_list<std::size_t> members);

  /// {0, 1, ..., n-1}
  static IndexSet range(std::size_t n);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t operator[](std::size_t k) const { return members_[k]; }
  std::span<const std::size_t> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(std::size_t a) const noexcept;

  /// |{b in I : b <= a}|, i.e. the 1-based position of a when a is a member.
  std::size_t count_at_most(std::size_t a) const noexcept;

  IndexSet with(std::size_t a) const;
  IndexSet without(std::size_t a) const;

  /// N \ I for N = {0, ..., n-1}.
  IndexSet complement(std::size_t n) const;

  /// Throws InvalidInput unless every member is < n.
  void check_bounds(std::size_t n) const;

  /// "{1, 3}" with 1-based members, as printed by the CLI.
  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

/// The n x n matrix of pairwise inner products of the halfspace normals.
/// Symmetric by construction and with a strictly positive diagonal.
class GramMatrix {
 public:
  /// Adopts explicit entries, e.g. inner products from a space that has no
  /// coordinate representation. Validates symmetry and the positive diagonal.
  static GramMatrix from_entries(DenseMatrix entries);

  std::size_t size() const noexcept { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const DenseMatrix& entries() const noexcept { return entries_; }

  DenseMatrix block(const IndexSet& rows, const IndexSet& cols) const;

  /// Scale of the singularity gate for G_{I,I}: prod_{i in I} G_ii.
  double diagonal_product(const IndexSet& set) const;

 private:
  explicit GramMatrix(DenseMatrix entries) : entries_(std::move(entries)) {}
  friend GramMatrix build_gram(const Polyhedron& poly);

  DenseMatrix entries_;
};

GramMatrix build_gram(const Polyhedron& poly);

/// det G_{rows, cols}, rows and columns in ascending index order.
double subdet(const GramMatrix& gram, const IndexSet& rows, const IndexSet& cols);

/// True when |det G_{I,I}| <= tol_det * prod ||u_i||^2.
bool is_singular(const GramMatrix& gram, const IndexSet& set, double det, double tol_det);

/// B_I^a: (-1)^{|s_I(a)|} for a in I, (-1)^{|I|+1} otherwise.
int sign_factor(const IndexSet& set, std::size_t a);

/// Cofactor numerators nu_i = sum_{j in I} w_j B_I^j B_I^i det G_{I\j, I\i}
/// for i in I (w_i itself when |I| = 1). Dividing by det G_{I,I} gives the
/// solution of G_{I,I} nu~ = w_I.
std::vector<double> nu_in(const GramMatrix& gram, const ResidualVector& w, const IndexSet& set);

/// nu_{i'} = sum_{j in J} w_j B_J^j B_J^{i'} det G_{I, J\j} with J = I + {i'}
/// and ascending column order. Equals det G_{I,I} times the residual of
/// constraint i' at x - sum_{i in I} (nu_i / det G_{I,I}) u_i, so a
/// nonpositive value certifies feasibility of i'.
double nu_out(const GramMatrix& gram, const ResidualVector& w, const IndexSet& set,
              std::size_t iprime);

/// Numerical rank of G via diagonally pivoted Cholesky on the unit-diagonal
/// scaling of G; a pivot counts when it exceeds tol_det.
std::size_t rank_bound(const GramMatrix& gram, double tol_det);

/// Generic cofactor (adjugate) solve numerators for a square system M y = b:
/// y_i * det M = sum_k b_k (-1)^{k+i} det M_{\k,\i}. Rows and columns are
/// positions within M. Used for the Banach-space verifier, where the matrix is
/// not a Gram matrix.
std::vector<double> cofactor_numerators(const DenseMatrix& m, std::span<const double> rhs);

}  // namespace polyproj
