#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyproj/core.hpp"
#include "polyproj/error.hpp"
#include "polyproj/projector.hpp"

// Verification machinery that never goes through the projector's
// determinants, multipliers or subset search. Only the ambient-space
// primitives of core.hpp are shared.

namespace polyproj {

struct DykstraState {
  Vector iterate;
  std::vector<Vector> corrections;  // one per halfspace
  std::size_t iterations = 0;       // completed cycles
  double displacement = 0.0;        // movement of the iterate over the last cycle
};

class MaxItersExceeded : public Error {
 public:
  MaxItersExceeded(const std::string& what, DykstraState last)
      : Error(what), last_(std::move(last)) {}
  const DykstraState& last() const noexcept { return last_; }

 private:
  DykstraState last_;
};

/// Cyclic Dykstra iteration with one correction term per halfspace. Stops
/// when a full cycle moves the iterate by less than tol.
DykstraState dykstra_run(const Polyhedron& poly, const Vector& x, double tol,
                         std::size_t max_iters = 1'000'000);

Vector dykstra(const Polyhedron& poly, const Vector& x, double tol,
               std::size_t max_iters = 1'000'000);

struct Violation {
  std::string condition;
  std::optional<std::size_t> index;  // 0-based halfspace index, when one applies
  double magnitude = 0.0;
};

struct Verdict {
  bool accepted = true;
  std::vector<Violation> violations;
  std::optional<std::uint64_t> seed;
  std::optional<Vector> counterexample;
  std::size_t samples_checked = 0;

  bool has(const std::string& condition) const;
  void add(std::string condition, std::optional<std::size_t> index, double magnitude);
};

/// Recomputes from raw data: positivity of the support multipliers,
/// feasibility of xbar, equality on the support ("complementarity"), and
/// stationarity |x - xbar - sum nu~_i u_i| <= tol.stat (1 + |x|). The
/// certificate's bookkeeping is checked too: det_gii against a Gram-Schmidt
/// determinant (within 1e-8 prod |u_i|^2) and residual_bound against the
/// recomputed off-support maximum. An absent certificate means an empty
/// support.
Verdict kkt_verify(const Polyhedron& poly, const Vector& x, const Vector& xbar,
                   const std::optional<SupportCertificate>& cert, const Tolerances& tol = {});

/// Samples feasible points h (random perturbations pushed into C by Dykstra)
/// and checks <x - xbar | h - xbar> <= 1e-8 (1 + |x - xbar| |h - xbar|). A
/// violation disproves optimality; passing is only evidence.
/// Throws Error when no feasible sample could be produced.
Verdict vi_spot_check(const Polyhedron& poly, const Vector& x, const Vector& xbar,
                      std::size_t samples, std::uint64_t seed);

/// Rebuilds a certificate for a candidate point: active set of xbar, then the
/// smallest independent subset whose nonnegative combination reproduces
/// x - xbar. When nothing fits exactly, returns the closest least-squares
/// attempt so that kkt_verify can name the failing condition. nullopt means
/// the candidate has no active constraints (empty support).
std::optional<SupportCertificate> certificate_from_candidate(const Polyhedron& poly,
                                                             const Vector& x, const Vector& xbar,
                                                             const Tolerances& tol = {});

}  // namespace polyproj
