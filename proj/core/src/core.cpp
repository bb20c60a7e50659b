#include "polyproj/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polyproj {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidInput("vector dimension must be at least 1");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw InvalidInput("vector coordinate " + std::to_string(i + 1) + " is not finite");
    }
  }
}

Vector::Vector(std::initializer_list<double> coords)
    : Vector(std::vector<double>(coords)) {}

Vector Vector::zero(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

double Vector::squared_norm() const noexcept {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return s;
}

double Vector::norm() const noexcept { return std::sqrt(squared_norm()); }

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "vector sum");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Vector(std::move(out));
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "vector difference");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Vector(std::move(out));
}

Vector operator*(double s, const Vector& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
  return Vector(std::move(out));
}

Halfspace::Halfspace(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  if (!std::isfinite(offset_)) throw InvalidInput("halfspace offset is not finite");
  if (normal_.squared_norm() <= 0.0) throw InvalidInput("halfspace normal is zero");
}

Polyhedron::Polyhedron(std::vector<Halfspace> halfspaces)
    : halfspaces_(std::move(halfspaces)) {
  if (halfspaces_.empty()) throw InvalidInput("polyhedron needs at least one halfspace");
  const std::size_t d = halfspaces_.front().dim();
  for (const auto& hs : halfspaces_) require_same_dim(hs.dim(), d, "polyhedron normals");
}

double ResidualVector::max() const {
  return *std::max_element(w_.begin(), w_.end());
}

double inner(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inner(const Vector& a, const Vector& b) { return inner(a.coords(), b.coords()); }

ResidualVector residuals(const Polyhedron& poly, const Vector& x) {
  std::vector<double> w;
  w.reserve(poly.size());
  for (const auto& hs : poly) w.push_back(inner(x, hs.normal()) - hs.offset());
  return ResidualVector(std::move(w));
}

bool contains(const Polyhedron& poly, const Vector& x, double tol) {
  if (tol < 0) throw InvalidInput("membership tolerance must be nonnegative");
  const auto w = residuals(poly, x);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!within_feasibility(w[i], poly[i].offset(), tol)) return false;
  }
  return true;
}

void project_halfspace(const Halfspace& hs, std::span<double> x) {
  const auto u = hs.normal().coords();
  const double r = inner(std::span<const double>(x.data(), x.size()), u) - hs.offset();
  if (r <= 0.0) return;
  const double step = r / hs.normal().squared_norm();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step * u[i];
}

Vector project_halfspace(const Halfspace& hs, const Vector& x) {
  std::vector<double> out(x.values());
  project_halfspace(hs, std::span<double>(out));
  return Vector(std::move(out));
}

}  // namespace polyproj
