#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polyproj/core.hpp"
#include "polyproj/error.hpp"
#include "polyproj/gram.hpp"

namespace polyproj {

/// Knobs of the finite support-enumeration algorithm.
struct SearchConfig {
  Tolerances tol{};
  /// Largest support cardinality tried; 0 means "numerical rank of G".
  std::size_t max_cardinality = 0;
  /// Worker threads evaluating candidate supports within one cardinality tier.
  unsigned workers = 1;
  /// Refuse polyhedra with more halfspaces than this (2^n - 1 candidates).
  std::size_t max_halfspaces = 24;
};

/// Machine-checkable witness that a point is the projection: the support I,
/// multipliers nu~_i > 0 with G_{I,I} nu~ = w_I, and det G_{I,I} > 0.
struct SupportCertificate {
  IndexSet support;
  std::vector<double> multipliers;
  double det_gii = 0.0;
  /// max_{i' not in I} <xbar|u_i'> - eta_i'; absent when I = N.
  std::optional<double> residual_bound;
};

struct SearchStats {
  std::uint64_t subsets_examined = 0;
  std::uint64_t singular_skipped = 0;
  std::uint64_t solves_rejected = 0;
  std::uint64_t feasibility_rejected = 0;

  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct ProjectionResult {
  Vector point;
  /// Absent iff the input already belonged to the polyhedron.
  std::optional<SupportCertificate> certificate;
  SearchStats stats;
};

/// The best rejected candidate seen during a failed search.
struct NearMiss {
  IndexSet support;
  std::vector<double> multipliers;
  /// Largest off-support violation, relative to (1 + |eta|).
  double violation = 0.0;
  std::size_t violated_index = 0;
};

/// No support passed the complementarity and feasibility checks. Either the
/// polyhedron is empty or the tolerances are too tight; the search cannot tell
/// these apart, so it reports what it saw.
class NoCertificate : public Error {
 public:
  NoCertificate(const std::string& what, SearchStats stats, std::optional<NearMiss> near_miss)
      : Error(what), stats_(stats), near_miss_(std::move(near_miss)) {}

  const SearchStats& stats() const noexcept { return stats_; }
  const std::optional<NearMiss>& near_miss() const noexcept { return near_miss_; }

 private:
  SearchStats stats_;
  std::optional<NearMiss> near_miss_;
};

/// Solves G_{I,I} nu~ = w_I by partial-pivoting elimination. Returns nullopt
/// (reject) when some nu~_i <= tol_pos. Throws SingularSystem if G_{I,I} is
/// exactly singular; callers are expected to gate on subdet first.
std::optional<std::vector<double>> solve_support(const GramMatrix& gram, const ResidualVector& w,
                                                 const IndexSet& set, double tol_pos);

/// Forms xbar = x - sum_{i in I} nu~_i u_i and accepts it iff every
/// constraint outside I holds within tol_feas * (1 + |eta|).
std::optional<Vector> feasibility_check(const Polyhedron& poly, const Vector& x,
                                        const IndexSet& set, std::span<const double> multipliers,
                                        double tol_feas);

/// Projection of x onto the polyhedron by enumerating candidate supports in
/// order of increasing cardinality, lexicographically within a cardinality,
/// returning the first accepted one. With cfg.workers > 1 each tier is split
/// across threads and the lexicographically smallest acceptance wins, so the
/// result (including stats) is identical to the sequential search.
///
/// Throws CapExceeded when the polyhedron has more than cfg.max_halfspaces
/// halfspaces and NoCertificate when no support is accepted.
ProjectionResult project(const Polyhedron& poly, const Vector& x, const SearchConfig& cfg = {});

struct GramSolution {
  IndexSet support;
  std::vector<double> multipliers;
  double det_gii = 0.0;
};

/// The same search, driven only by inner products. Off-support feasibility is
/// tested through w_i' - sum_k nu~_k G_{k,i'} <= tol_feas * (1 + |w_i'|).
/// Returns nullopt when every w_i is already nonpositive (x feasible); callers
/// reconstruct xbar = x - sum nu~_i u_i in their own space.
std::optional<GramSolution> project_by_gram(const GramMatrix& gram, const ResidualVector& w,
                                            const SearchConfig& cfg = {});

struct SupportReduction {
  IndexSet support;
  std::vector<double> coefficients;
};

/// Rewrites sum nu_i u_i (nu >= 0, sum != 0) over a linearly independent
/// subfamily with strictly positive coefficients. Searches subsets of
/// {i : nu_i > 0} by increasing cardinality and accepts the first exact,
/// positive representation. Throws NumericalBreakdown if none is found.
SupportReduction reduce_support(std::span<const Vector> normals, std::span<const double> nu,
                                const Tolerances& tol = {});

/// Number of k-subsets of an n-set (saturating at UINT64_MAX).
std::uint64_t binomial(std::size_t n, std::size_t k);

/// The r-th (0-based) k-subset of {0..n-1} in lexicographic order.
std::vector<std::size_t> nth_combination(std::size_t n, std::size_t k, std::uint64_t r);

/// Advances a k-subset of {0..n-1} to its lexicographic successor; false at the end.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n);

}  // namespace polyproj
