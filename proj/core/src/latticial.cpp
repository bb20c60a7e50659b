#include "polyproj/latticial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polyproj {
namespace {

DenseMatrix basis_matrix(const std::vector<Vector>& basis) {
  const std::size_t n = basis.size();
  if (n == 0) throw InvalidInput("latticial cone needs at least one generator");
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (basis[i].dim() != n) {
      throw DimensionMismatch("latticial cone basis must be square: generator " +
                              std::to_string(i + 1) + " has dimension " +
                              std::to_string(basis[i].dim()));
    }
    for (std::size_t d = 0; d < n; ++d) m(d, i) = basis[i][d];
  }
  return m;
}

PivotedLu checked_lu(const std::vector<Vector>& basis) {
  PivotedLu lu(basis_matrix(basis));
  if (lu.exactly_singular() || lu.pivot_ratio() > LatticialCone::kMaxPivotRatio) {
    throw SingularSystem("latticial cone basis is singular or too ill-conditioned");
  }
  return lu;
}

std::vector<Vector> compute_duals(const PivotedLu& lu, std::size_t n) {
  // B has the b_i as columns; <u_j|b_i> = -delta_ij reads B^T u_j = -e_j.
  std::vector<Vector> duals;
  duals.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> rhs(n, 0.0);
    rhs[j] = -1.0;
    duals.emplace_back(lu.solve_transposed(rhs));
  }
  return duals;
}

Polyhedron dual_halfspaces(const std::vector<Vector>& duals) {
  std::vector<Halfspace> hs;
  hs.reserve(duals.size());
  for (const auto& u : duals) hs.emplace_back(u, 0.0);
  return Polyhedron(std::move(hs));
}

}  // namespace

LatticialCone::LatticialCone(std::vector<Vector> basis)
    : basis_(std::move(basis)),
      basis_lu_(checked_lu(basis_)),
      duals_{compute_duals(basis_lu_, basis_.size())},
      halfspaces_(dual_halfspaces(duals_.generators)) {}

std::vector<double> LatticialCone::coordinates(const Vector& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("cone coordinates: point dimension");
  return basis_lu_.solve(x.coords());
}

DualGenerators dual_generators(const LatticialCone& cone) { return cone.duals(); }

bool cone_membership(const LatticialCone& cone, const Vector& x, double tol) {
  if (x.dim() != cone.dim()) throw DimensionMismatch("cone membership: point dimension");
  for (const auto& u : cone.duals().generators)
    if (inner(x, u) > tol) return false;
  return true;
}

MoreauSplit project_cone(const LatticialCone& cone, const Vector& x, const SearchConfig& cfg) {
  const Polyhedron poly = cone.as_polyhedron();
  // Every principal ratio det G_II / prod G_ii is at least the full one.
  const GramMatrix gram = build_gram(poly);
  const IndexSet all = IndexSet::range(cone.dim());
  SearchConfig local = cfg;
  local.tol.det = std::min(cfg.tol.det, 0.5 * subdet(gram, all, all) / gram.diagonal_product(all));
  auto res = project(poly, x, local);
  Vector y = res.point;
  Vector z = x - y;

  const double scale = 1.0 + x.squared_norm();
  const double sum_gap = (x - (y + z)).norm();
  const double cross = inner(y, z);
  if (sum_gap > 1e-10 * std::sqrt(scale) || std::abs(cross) > 1e-10 * scale) {
    throw NumericalBreakdown("Moreau decomposition check failed: |x - y - z| = " +
                             std::to_string(sum_gap) + ", <y|z> = " + std::to_string(cross));
  }
  return {std::move(y), std::move(z), std::move(res.certificate)};
}

std::optional<MixedRepresentation> solve_mixed_system(const LatticialCone& cone, const Vector& x,
                                                      const IndexSet& support) {
  const std::size_t n = cone.dim();
  support.check_bounds(n);
  if (x.dim() != n) throw DimensionMismatch("mixed representation: point dimension");
  const IndexSet complement = support.complement(n);

  // Columns: b_i for i in I' (ascending), then u_j for j in I (ascending).
  DenseMatrix m(n, n);
  std::size_t col = 0;
  for (auto i : complement) {
    for (std::size_t d = 0; d < n; ++d) m(d, col) = cone.basis()[i][d];
    ++col;
  }
  for (auto j : support) {
    for (std::size_t d = 0; d < n; ++d) m(d, col) = cone.duals().generators[j][d];
    ++col;
  }
  PivotedLu lu(m);
  if (lu.exactly_singular() || lu.pivot_ratio() > LatticialCone::kMaxPivotRatio) return std::nullopt;
  const auto coef = lu.solve(x.coords());

  MixedRepresentation rep{support, complement, {}, {}};
  rep.alpha.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(complement.size()));
  rep.beta.assign(coef.begin() + static_cast<std::ptrdiff_t>(complement.size()), coef.end());
  return rep;
}

MixedRepresentation mixed_representation(const LatticialCone& cone, const Vector& x,
                                         const SearchConfig& cfg) {
  const auto split = project_cone(cone, x, cfg);
  if (!split.certificate) {
    const IndexSet all = IndexSet::range(cone.dim());
    return {IndexSet{}, all, cone.coordinates(x), {}};
  }
  const auto& cert = *split.certificate;
  auto rep = solve_mixed_system(cone, x, cert.support);
  if (!rep) {
    throw NumericalBreakdown("mixed basis " + cert.support.to_string() +
                             " is singular although the generators are independent");
  }
  // beta is nu~ itself, not the re-solved value.
  rep->beta = cert.multipliers;

  const double tol = 1e-10 * (1.0 + x.norm());
  for (std::size_t k = 0; k < rep->alpha.size(); ++k) {
    if (rep->alpha[k] < -tol) {
      throw NumericalBreakdown("mixed representation has alpha_" +
                               std::to_string(rep->complement[k] + 1) + " = " +
                               std::to_string(rep->alpha[k]) + " < 0");
    }
  }
  for (double b : rep->beta) {
    if (!(b > 0.0)) throw NumericalBreakdown("mixed representation has a nonpositive beta");
  }
  return *rep;
}

}  // namespace polyproj
