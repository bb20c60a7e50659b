#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "polyproj/error.hpp"

namespace polyproj {

/// A point of the ambient inner-product space, stored as finite real
/// coordinates. Immutable once constructed; every coordinate is finite and the
/// dimension is at least one.
class Vector {
 public:
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  /// The origin of R^dim.
  static Vector zero(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& values() const noexcept { return coords_; }

  double norm() const noexcept;
  double squared_norm() const noexcept;

  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& a);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

/// {h : <h|normal> <= offset}. The normal must be nonzero.
class Halfspace {
 public:
  Halfspace(Vector normal, double offset);

  const Vector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return normal_.dim(); }

 private:
  Vector normal_;
  double offset_;
};

/// A finite intersection of halfspaces. Index order is fixed at construction;
/// every index-set convention in the library refers to this order.
class Polyhedron {
 public:
  explicit Polyhedron(std::vector<Halfspace> halfspaces);

  std::size_t size() const noexcept { return halfspaces_.size(); }
  std::size_t dim() const noexcept { return halfspaces_.front().dim(); }
  const Halfspace& operator[](std::size_t i) const { return halfspaces_[i]; }
  auto begin() const noexcept { return halfspaces_.begin(); }
  auto end() const noexcept { return halfspaces_.end(); }

 private:
  std::vector<Halfspace> halfspaces_;
};

/// w_i = <x|u_i> - eta_i for every halfspace of a polyhedron.
class ResidualVector {
 public:
  explicit ResidualVector(std::vector<double> w) : w_(std::move(w)) {}

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }
  double max() const;

 private:
  std::vector<double> w_;
};

/// Numerical thresholds shared by the projector, the oracle and the CLI.
///
/// Residual tests are scaled: a residual r of a constraint with offset eta
/// counts as nonpositive when r <= feas * (1 + |eta|). The singularity gate
/// treats det G_{I,I} as zero when |det| <= det * prod_{i in I} ||u_i||^2.
struct Tolerances {
  double feas = 1e-9;
  double det = 1e-10;
  double pos = 1e-12;
  double stat = 1e-9;
};

/// r <= tol * (1 + |offset|)
inline bool within_feasibility(double residual, double offset, double tol) noexcept {
  return residual <= tol * (1.0 + (offset < 0 ? -offset : offset));
}

double inner(const Vector& a, const Vector& b);
double inner(std::span<const double> a, std::span<const double> b);

ResidualVector residuals(const Polyhedron& poly, const Vector& x);

bool contains(const Polyhedron& poly, const Vector& x, double tol);

/// Closed-form projection onto one halfspace: x itself when feasible,
/// otherwise x - ((<x|u> - eta) / ||u||^2) u.
Vector project_halfspace(const Halfspace& hs, const Vector& x);

/// In-place variant over raw coordinates, for iterative schemes.
void project_halfspace(const Halfspace& hs, std::span<double> x);

}  // namespace polyproj
