#pragma once

#include <optional>
#include <vector>

#include "polyproj/core.hpp"
#include "polyproj/gram.hpp"
#include "polyproj/projector.hpp"

namespace polyproj {

/// u_1..u_n with <u_j|b_i> = -delta_ij. They generate the polar cone K°.
struct DualGenerators {
  std::vector<Vector> generators;
};

/// K = cone{b_1, ..., b_n} for n linearly independent vectors of R^n.
///
/// Construction rejects bases whose elimination pivot ratio exceeds 1e12 and
/// computes the dual generators with n partial-pivoting solves against the
/// transposed basis matrix.
class LatticialCone {
 public:
  static constexpr double kMaxPivotRatio = 1e12;

  explicit LatticialCone(std::vector<Vector> basis);

  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const DualGenerators& duals() const noexcept { return duals_; }

  /// K as the intersection of {h : <h|u_i> <= 0}.
  const Polyhedron& as_polyhedron() const noexcept { return halfspaces_; }

  /// Coefficients of x in the basis {b_i}.
  std::vector<double> coordinates(const Vector& x) const;

 private:
  std::vector<Vector> basis_;
  PivotedLu basis_lu_;  // columns are the b_i
  DualGenerators duals_;
  Polyhedron halfspaces_;
};

DualGenerators dual_generators(const LatticialCone& cone);

/// x in K iff <x|u_i> <= tol for all i.
bool cone_membership(const LatticialCone& cone, const Vector& x, double tol);

/// Moreau decomposition x = y + z with y = P_K x and z = P_{K°} x.
struct MoreauSplit {
  Vector y;
  Vector z;
  /// The projector's certificate for y; absent when x is already in K.
  std::optional<SupportCertificate> certificate;
};

/// Projects onto K through the halfspace system of its dual generators and
/// checks x = y + z, <y|z> = 0 (NumericalBreakdown otherwise).
MoreauSplit project_cone(const LatticialCone& cone, const Vector& x, const SearchConfig& cfg = {});

/// x = sum_{i in I'} alpha_i b_i + sum_{j in I} beta_j u_j with I' = N \ I,
/// alpha >= 0, beta > 0. P_K x is the alpha part.
struct MixedRepresentation {
  IndexSet support;     // I
  IndexSet complement;  // I'
  std::vector<double> alpha;  // indexed like complement
  std::vector<double> beta;   // indexed like support
};

/// Takes I and beta = nu~ from the projector certificate, then solves the
/// mixed basis {b_i}_{i in I'} + {u_j}_{j in I} for alpha. For x in K this is
/// the trivial representation I = {} with alpha the basis coordinates of x.
/// Throws NumericalBreakdown if the mixed basis is singular or the sign
/// pattern (alpha >= 0, beta > 0) fails beyond tolerance.
MixedRepresentation mixed_representation(const LatticialCone& cone, const Vector& x,
                                         const SearchConfig& cfg = {});

/// Solves x = sum_{i not in I} alpha_i b_i + sum_{j in I} beta_j u_j for an
/// arbitrary I (no sign requirements). nullopt if the mixed basis is singular.
std::optional<MixedRepresentation> solve_mixed_system(const LatticialCone& cone, const Vector& x,
                                                      const IndexSet& support);

}  // namespace polyproj
