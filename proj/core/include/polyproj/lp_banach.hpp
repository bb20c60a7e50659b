#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyproj/error.hpp"

// Projections in the sequence spaces l_p, p > 1.
//
// Elements are finitely supported: a leading coordinate array followed by an
// implicit zero tail. Every "for all j in N" condition is therefore checked on
// the finite union of functional supports and leading coordinates; beyond
// that, candidate and point are both zero and the conditions hold trivially.
//
// l_1 is excluded (no usable derivative formula for the norm). For L_p(Omega)
// the same reasoning only yields that the projection coincides with x almost
// everywhere on the common zero set W of the functionals; there is no
// computable representation, so no operation is offered for it.

namespace polyproj::lp {

/// A finitely supported element of l_p. Coordinates are 0-based.
class LpVector {
 public:
  LpVector(std::vector<double> leading, double p);

  double p() const noexcept { return p_; }
  std::size_t leading_size() const noexcept { return coords_.size(); }
  const std::vector<double>& leading() const noexcept { return coords_; }

  /// Coordinate k, zero beyond the leading part.
  double operator[](std::size_t k) const noexcept { return k < coords_.size() ? coords_[k] : 0.0; }

  /// ||v||_p over the finite support.
  double norm() const;

 private:
  std::vector<double> coords_;
  double p_;
};

/// One constraint delta_k h_k <= eta_k on coordinate k, |delta_k| = 1.
struct CoordinateConstraint {
  std::size_t coord;
  int sign;
  double offset;
};

/// Constraints on distinct coordinates (the set J), kept in ascending
/// coordinate order. Always satisfiable coordinate by coordinate.
class CoordinateHalfspaceSystem {
 public:
  explicit CoordinateHalfspaceSystem(std::vector<CoordinateConstraint> constraints);

  const std::vector<CoordinateConstraint>& constraints() const noexcept { return constraints_; }
  /// One past the highest constrained coordinate.
  std::size_t extent() const noexcept;

 private:
  std::vector<CoordinateConstraint> constraints_;
};

/// Constraints <f_i|h> <= eta_i with finitely supported functionals
/// f_i = sum_j lambda^i_j e_j.
class SparseFunctionalSystem {
 public:
  struct Functional {
    std::vector<std::pair<std::size_t, double>> terms;  // (coordinate, lambda), nonzero lambdas
    double offset = 0.0;
  };

  explicit SparseFunctionalSystem(std::vector<Functional> functionals);

  /// f_k = delta_k e_k for every constraint of the coordinate system.
  static SparseFunctionalSystem from_coordinates(const CoordinateHalfspaceSystem& system);

  std::size_t size() const noexcept { return functionals_.size(); }
  const Functional& operator[](std::size_t i) const { return functionals_[i]; }

  /// lambda^i_j (zero when j is outside the support of f_i).
  double coefficient(std::size_t i, std::size_t j) const;

  /// Ascending union of the functional supports; W is its complement.
  const std::vector<std::size_t>& support_union() const noexcept { return support_; }
  bool in_w(std::size_t coord) const;

  /// One past the largest support coordinate.
  std::size_t extent() const noexcept { return support_.empty() ? 0 : support_.back() + 1; }

  double apply(std::size_t i, const LpVector& h) const;

 private:
  std::vector<Functional> functionals_;
  std::vector<std::size_t> support_;
};

struct FailedCondition {
  std::string condition;
  std::size_t index = 0;
  double magnitude = 0.0;
};

struct CandidateVerdict {
  bool accepted = false;
  std::vector<FailedCondition> failed_conditions;
  /// Constraint set I and paired coordinates of the accepting witness.
  std::vector<std::size_t> witness_constraints;
  std::vector<std::size_t> witness_coordinates;
  std::vector<double> multipliers;
};

struct LpTolerances {
  double feas = 1e-9;
  double active = 1e-9;
  double equation = 1e-9;
  double det = 1e-12;
  double pos = 0.0;
};

/// |t|^{p-2} t, continuously extended by 0 at t = 0.
double duality_map(double t, double p);

/// zbar_k = delta_k eta_k when k is constrained and delta_k x_k >= eta_k,
/// x_k otherwise. The result covers at least the constrained coordinates.
LpVector lp_clip_project(const CoordinateHalfspaceSystem& system, const LpVector& x);

/// Checks whether xbar is the l_p projection of x. Over subsets I of the
/// active constraints, paired with coordinate sets R of equal size such that
/// det L_{I,R} != 0, it tests: the coordinate formula on R, strict positivity
/// of the multipliers built from xi_k = -|xbar_k - x_k|^{p-2}(xbar_k - x_k),
/// the derivative condition on the remaining support coordinates, and
/// xbar = x on W. Accepts iff some (I, R) passes everything.
CandidateVerdict verify_candidate(const SparseFunctionalSystem& system, const LpVector& x,
                                  const LpVector& xbar, const LpTolerances& tol = {});

/// k'(u, v) = sum_i |u_i - x_i|^{p-2}(u_i - x_i) v_i for k = (1/p)|. - x|_p^p.
double directional_derivative_lp(const LpVector& u, const LpVector& v, const LpVector& x);

}  // namespace polyproj::lp
