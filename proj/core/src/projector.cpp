#include "polyproj/projector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace polyproj {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * num / i;
  }
  return r;
}

std::vector<std::size_t> nth_combination(std::size_t n, std::size_t k, std::uint64_t r) {
  std::vector<std::size_t> combo;
  combo.reserve(k);
  std::size_t v = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    for (;; ++v) {
      const std::uint64_t count = binomial(n - v - 1, k - pos - 1);
      if (r < count) break;
      r -= count;
    }
    combo.push_back(v++);
  }
  return combo;
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

namespace {

struct Candidate {
  IndexSet support;
  std::vector<double> multipliers;
  double det = 0.0;
  std::vector<double> point;  // empty for Gram-only searches
  std::optional<double> residual_bound;
};

bool better_miss(const NearMiss& a, const std::optional<NearMiss>& b) {
  if (!b) return true;
  if (a.violation != b->violation) return a.violation < b->violation;
  return a.support < b->support;
}

void merge_miss(std::optional<NearMiss>& into, const std::optional<NearMiss>& from) {
  if (from && better_miss(*from, into)) into = from;
}

void accumulate(SearchStats& into, const SearchStats& from) {
  into.subsets_examined += from.subsets_examined;
  into.singular_skipped += from.singular_skipped;
  into.solves_rejected += from.solves_rejected;
  into.feasibility_rejected += from.feasibility_rejected;
}

/// Step 1 and Step 2 for one candidate: the determinant gate, then the
/// complementarity system. nullopt means skipped; stats record why.
std::optional<std::vector<double>> gated_solve(const GramMatrix& gram, const ResidualVector& w,
                                               const IndexSet& set, const Tolerances& tol,
                                               SearchStats& stats, double& det) {
  PivotedLu lu(gram.block(set, set));
  det = lu.determinant();
  if (lu.exactly_singular() || is_singular(gram, set, det, tol.det)) {
    ++stats.singular_skipped;
    return std::nullopt;
  }
  std::vector<double> rhs;
  rhs.reserve(set.size());
  for (auto i : set) rhs.push_back(w[i]);
  auto nu = lu.solve(rhs);
  for (double v : nu) {
    if (!(v > tol.pos)) {
      ++stats.solves_rejected;
      return std::nullopt;
    }
  }
  return nu;
}

struct ChunkResult {
  SearchStats stats;
  std::optional<Candidate> accepted;
  std::optional<NearMiss> near_miss;
};

/// Runs candidates [first, first + count) of the k-tier.
template <class Evaluate>
ChunkResult run_chunk(std::size_t n, std::size_t k, std::uint64_t first, std::uint64_t count,
                      const Evaluate& evaluate, const std::atomic<std::size_t>* winner,
                      std::size_t chunk_id) {
  ChunkResult out;
  auto combo = nth_combination(n, k, first);
  for (std::uint64_t r = 0; r < count; ++r) {
    if (winner && winner->load(std::memory_order_relaxed) < chunk_id) break;
    ++out.stats.subsets_examined;
    const IndexSet set(combo);
    if (auto c = evaluate(set, out.stats, out.near_miss)) {
      out.accepted = std::move(c);
      break;
    }
    if (r + 1 < count) next_combination(combo, n);
  }
  return out;
}

template <class Evaluate>
std::optional<Candidate> search_supports(std::size_t n, std::size_t max_card, unsigned workers,
                                         const Evaluate& evaluate, SearchStats& stats,
                                         std::optional<NearMiss>& near_miss) {
  for (std::size_t k = 1; k <= max_card; ++k) {
    const std::uint64_t tier = binomial(n, k);
    const std::uint64_t chunks = std::min<std::uint64_t>(std::max(1u, workers), tier);

    if (chunks <= 1) {
      auto res = run_chunk(n, k, 0, tier, evaluate, nullptr, 0);
      accumulate(stats, res.stats);
      merge_miss(near_miss, res.near_miss);
      if (res.accepted) return res.accepted;
      continue;
    }

    // Contiguous lexicographic ranges; a chunk may stop early once a lower
    // chunk has accepted, since its result would be discarded anyway.
    std::vector<ChunkResult> results(chunks);
    std::atomic<std::size_t> winner{std::numeric_limits<std::size_t>::max()};
    {
      std::vector<std::jthread> pool;
      pool.reserve(chunks);
      for (std::size_t c = 0; c < chunks; ++c) {
        const std::uint64_t begin = tier * c / chunks;
        const std::uint64_t end = tier * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
          results[c] = run_chunk(n, k, begin, end - begin, evaluate, &winner, c);
          if (results[c].accepted) {
            std::size_t cur = winner.load();
            while (c < cur && !winner.compare_exchange_weak(cur, c)) {
            }
          }
        });
      }
    }

    for (std::size_t c = 0; c < chunks; ++c) {
      accumulate(stats, results[c].stats);
      if (results[c].accepted) return results[c].accepted;
      merge_miss(near_miss, results[c].near_miss);
    }
  }
  return std::nullopt;
}

std::size_t support_cap(const GramMatrix& gram, const SearchConfig& cfg) {
  std::size_t cap = rank_bound(gram, cfg.tol.det);
  if (cfg.max_cardinality > 0) cap = std::min(cap, cfg.max_cardinality);
  return std::max<std::size_t>(cap, 1);
}

void check_cap(std::size_t n, const SearchConfig& cfg) {
  if (n > cfg.max_halfspaces) {
    throw CapExceeded(std::to_string(n) + " halfspaces exceed the enumeration cap of " +
                      std::to_string(cfg.max_halfspaces) +
                      " (2^n - 1 candidate supports); raise the cap explicitly or use the "
                      "iterative Dykstra oracle");
  }
}

std::string no_certificate_message(const SearchStats& stats, const std::optional<NearMiss>& miss) {
  std::string msg = "no support certificate found after " +
                    std::to_string(stats.subsets_examined) +
                    " candidate supports (the polyhedron may be empty or the tolerances too tight)";
  if (miss) {
    msg += "; nearest miss " + miss->support.to_string() + " violates constraint " +
           std::to_string(miss->violated_index + 1) + " by " + std::to_string(miss->violation);
  }
  return msg;
}

}  // namespace

std::optional<std::vector<double>> solve_support(const GramMatrix& gram, const ResidualVector& w,
                                                 const IndexSet& set, double tol_pos) {
  if (set.empty()) throw InvalidInput("solve_support needs a nonempty index set");
  if (w.size() != gram.size()) throw DimensionMismatch("solve_support: residual vector size");
  PivotedLu lu(gram.block(set, set));
  std::vector<double> rhs;
  for (auto i : set) rhs.push_back(w[i]);
  auto nu = lu.solve(rhs);
  for (double v : nu)
    if (!(v > tol_pos)) return std::nullopt;
  return nu;
}

std::optional<Vector> feasibility_check(const Polyhedron& poly, const Vector& x,
                                        const IndexSet& set, std::span<const double> multipliers,
                                        double tol_feas) {
  if (multipliers.size() != set.size()) {
    throw DimensionMismatch("feasibility_check: one multiplier per support index");
  }
  set.check_bounds(poly.size());
  std::vector<double> point(x.values());
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto u = poly[set[k]].normal().coords();
    for (std::size_t d = 0; d < point.size(); ++d) point[d] -= multipliers[k] * u[d];
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (set.contains(i)) continue;
    const double r = inner(point, poly[i].normal().coords()) - poly[i].offset();
    if (!within_feasibility(r, poly[i].offset(), tol_feas)) return std::nullopt;
  }
  return Vector(std::move(point));
}

ProjectionResult project(const Polyhedron& poly, const Vector& x, const SearchConfig& cfg) {
  const std::size_t n = poly.size();
  check_cap(n, cfg);
  if (x.dim() != poly.dim()) throw DimensionMismatch("project: point and polyhedron dimensions");

  if (contains(poly, x, cfg.tol.feas)) return {x, std::nullopt, {}};

  const GramMatrix gram = build_gram(poly);
  const ResidualVector w = residuals(poly, x);
  const Tolerances tol = cfg.tol;

  auto evaluate = [&](const IndexSet& set, SearchStats& stats,
                      std::optional<NearMiss>& miss) -> std::optional<Candidate> {
    double det = 0.0;
    auto nu = gated_solve(gram, w, set, tol, stats, det);
    if (!nu) return std::nullopt;

    // Step 3: xbar = x - sum nu~_i u_i must satisfy every other constraint.
    std::vector<double> point(x.values());
    for (std::size_t k = 0; k < set.size(); ++k) {
      const auto u = poly[set[k]].normal().coords();
      for (std::size_t d = 0; d < point.size(); ++d) point[d] -= (*nu)[k] * u[d];
    }
    std::optional<double> bound;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (set.contains(i)) continue;
      const double r = inner(point, poly[i].normal().coords()) - poly[i].offset();
      bound = bound ? std::max(*bound, r) : r;
      const double rel = r / (1.0 + std::abs(poly[i].offset()));
      if (rel > worst) {
        worst = rel;
        worst_index = i;
      }
    }
    if (bound && worst > tol.feas) {
      ++stats.feasibility_rejected;
      NearMiss m{set, *nu, worst, worst_index};
      if (better_miss(m, miss)) miss = std::move(m);
      return std::nullopt;
    }
    return Candidate{set, std::move(*nu), det, std::move(point), bound};
  };

  SearchStats stats;
  std::optional<NearMiss> miss;
  auto found = search_supports(n, support_cap(gram, cfg), cfg.workers, evaluate, stats, miss);
  if (!found) throw NoCertificate(no_certificate_message(stats, miss), stats, miss);

  SupportCertificate cert{std::move(found->support), std::move(found->multipliers), found->det,
                          found->residual_bound};
  return {Vector(std::move(found->point)), std::move(cert), stats};
}

std::optional<GramSolution> project_by_gram(const GramMatrix& gram, const ResidualVector& w,
                                            const SearchConfig& cfg) {
  const std::size_t n = gram.size();
  check_cap(n, cfg);
  if (w.size() != n) throw DimensionMismatch("project_by_gram: residual vector size");
  const Tolerances tol = cfg.tol;

  if (std::all_of(w.values().begin(), w.values().end(), [&](double r) { return r <= tol.feas; })) {
    return std::nullopt;
  }

  auto evaluate = [&](const IndexSet& set, SearchStats& stats,
                      std::optional<NearMiss>& miss) -> std::optional<Candidate> {
    double det = 0.0;
    auto nu = gated_solve(gram, w, set, tol, stats, det);
    if (!nu) return std::nullopt;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (set.contains(i)) continue;
      double r = w[i];
      for (std::size_t k = 0; k < set.size(); ++k) r -= (*nu)[k] * gram(set[k], i);
      const double rel = r / (1.0 + std::abs(w[i]));
      if (rel > worst) {
        worst = rel;
        worst_index = i;
      }
    }
    if (worst > tol.feas) {
      ++stats.feasibility_rejected;
      NearMiss m{set, *nu, worst, worst_index};
      if (better_miss(m, miss)) miss = std::move(m);
      return std::nullopt;
    }
    return Candidate{set, std::move(*nu), det, {}, std::nullopt};
  };

  SearchStats stats;
  std::optional<NearMiss> miss;
  auto found = search_supports(n, support_cap(gram, cfg), cfg.workers, evaluate, stats, miss);
  if (!found) throw NoCertificate(no_certificate_message(stats, miss), stats, miss);
  return GramSolution{std::move(found->support), std::move(found->multipliers), found->det};
}

SupportReduction reduce_support(std::span<const Vector> normals, std::span<const double> nu,
                                const Tolerances& tol) {
  if (normals.size() != nu.size() || normals.empty()) {
    throw DimensionMismatch("reduce_support: one coefficient per normal");
  }
  const std::size_t dim = normals.front().dim();
  std::vector<double> target(dim, 0.0);
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] < 0 || !std::isfinite(nu[i])) throw InvalidInput("reduce_support: coefficients must be >= 0");
    if (normals[i].dim() != dim) throw DimensionMismatch("reduce_support: normal dimensions");
    if (nu[i] > 0) {
      positive.push_back(i);
      for (std::size_t d = 0; d < dim; ++d) target[d] += nu[i] * normals[i][d];
    }
  }
  const double target_norm = std::sqrt(inner(target, target));
  if (target_norm == 0.0) throw InvalidInput("reduce_support: combination must be nonzero");

  const std::size_t m = positive.size();
  for (std::size_t k = 1; k <= std::min(m, dim); ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t j = 0; j < k; ++j) pick[j] = j;
    do {
      DenseMatrix g(k, k);
      std::vector<double> rhs(k);
      double diag = 1.0;
      for (std::size_t a = 0; a < k; ++a) {
        const auto& ua = normals[positive[pick[a]]];
        rhs[a] = inner(ua.coords(), std::span<const double>(target));
        for (std::size_t b = 0; b < k; ++b) g(a, b) = inner(ua, normals[positive[pick[b]]]);
        diag *= g(a, a);
      }
      PivotedLu lu(g);
      if (lu.exactly_singular() || std::abs(lu.determinant()) <= tol.det * diag) continue;
      auto coef = lu.solve(rhs);
      if (!std::all_of(coef.begin(), coef.end(), [&](double c) { return c > tol.pos; })) continue;

      std::vector<double> diff(target);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t d = 0; d < dim; ++d) diff[d] -= coef[a] * normals[positive[pick[a]]][d];
      if (std::sqrt(inner(diff, diff)) > tol.stat * (1.0 + target_norm)) continue;

      std::vector<std::size_t> members(k);
      for (std::size_t a = 0; a < k; ++a) members[a] = positive[pick[a]];
      return {IndexSet(std::move(members)), std::move(coef)};
    } while (next_combination(pick, m));
  }
  throw NumericalBreakdown("reduce_support: no independent positive representation found");
}

}  // namespace polyproj
