#include "polyproj/lp_banach.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyproj/gram.hpp"
#include "polyproj/linalg.hpp"
#include "polyproj/projector.hpp"

namespace polyproj::lp {

LpVector::LpVector(std::vector<double> leading, double p) : coords_(std::move(leading)), p_(p) {
  if (!(p_ > 1.0) || !std::isfinite(p_)) {
    throw InvalidInput("l_p exponent must be a finite p > 1, got " + std::to_string(p_));
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      throw InvalidInput("l_p coordinate " + std::to_string(k + 1) + " is not finite");
    }
  }
}

double LpVector::norm() const {
  double s = 0.0;
  for (double c : coords_) s += std::pow(std::abs(c), p_);
  return std::pow(s, 1.0 / p_);
}

CoordinateHalfspaceSystem::CoordinateHalfspaceSystem(std::vector<CoordinateConstraint> constraints)
    : constraints_(std::move(constraints)) {
  std::sort(constraints_.begin(), constraints_.end(),
            [](const auto& a, const auto& b) { return a.coord < b.coord; });
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const auto& c = constraints_[k];
    if (c.sign != 1 && c.sign != -1) {
      throw InvalidInput("coordinate constraint on " + std::to_string(c.coord + 1) +
                         ": |delta| must be 1");
    }
    if (!std::isfinite(c.offset)) throw InvalidInput("coordinate constraint offset is not finite");
    if (k > 0 && constraints_[k - 1].coord == c.coord) {
      throw InvalidInput("coordinate " + std::to_string(c.coord + 1) + " is constrained twice");
    }
  }
}

std::size_t CoordinateHalfspaceSystem::extent() const noexcept {
  return constraints_.empty() ? 0 : constraints_.back().coord + 1;
}

SparseFunctionalSystem::SparseFunctionalSystem(std::vector<Functional> functionals)
    : functionals_(std::move(functionals)) {
  for (std::size_t i = 0; i < functionals_.size(); ++i) {
    auto& f = functionals_[i];
    std::erase_if(f.terms, [](const auto& t) { return t.second == 0.0; });
    std::sort(f.terms.begin(), f.terms.end());
    if (f.terms.empty()) {
      throw InvalidInput("functional " + std::to_string(i + 1) + " is zero");
    }
    for (std::size_t t = 1; t < f.terms.size(); ++t) {
      if (f.terms[t - 1].first == f.terms[t].first) {
        throw InvalidInput("functional " + std::to_string(i + 1) + " repeats a coordinate");
      }
    }
    for (const auto& [j, l] : f.terms) {
      if (!std::isfinite(l)) throw InvalidInput("functional coefficient is not finite");
      support_.push_back(j);
    }
  }
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
}

SparseFunctionalSystem SparseFunctionalSystem::from_coordinates(
    const CoordinateHalfspaceSystem& system) {
  std::vector<Functional> fs;
  for (const auto& c : system.constraints()) {
    fs.push_back({{{c.coord, static_cast<double>(c.sign)}}, c.offset});
  }
  return SparseFunctionalSystem(std::move(fs));
}

double SparseFunctionalSystem::coefficient(std::size_t i, std::size_t j) const {
  const auto& terms = functionals_[i].terms;
  auto it = std::lower_bound(terms.begin(), terms.end(), j,
                             [](const auto& t, std::size_t key) { return t.first < key; });
  return (it != terms.end() && it->first == j) ? it->second : 0.0;
}

bool SparseFunctionalSystem::in_w(std::size_t coord) const {
  return !std::binary_search(support_.begin(), support_.end(), coord);
}

double SparseFunctionalSystem::apply(std::size_t i, const LpVector& h) const {
  double s = 0.0;
  for (const auto& [j, l] : functionals_[i].terms) s += l * h[j];
  return s;
}

double duality_map(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p - 2.0) * t;
}

LpVector lp_clip_project(const CoordinateHalfspaceSystem& system, const LpVector& x) {
  std::vector<double> z(std::max(x.leading_size(), system.extent()), 0.0);
  std::copy(x.leading().begin(), x.leading().end(), z.begin());
  for (const auto& c : system.constraints()) {
    if (c.sign * z[c.coord] >= c.offset) z[c.coord] = c.sign * c.offset;
  }
  return LpVector(std::move(z), x.p());
}

namespace {

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

void add_failure(CandidateVerdict& v, std::string cond, std::size_t index, double magnitude) {
  v.failed_conditions.push_back({std::move(cond), index, magnitude});
}

}  // namespace

CandidateVerdict verify_candidate(const SparseFunctionalSystem& system, const LpVector& x,
                                  const LpVector& xbar, const LpTolerances& tol) {
  if (x.p() != xbar.p()) throw InvalidInput("verify_candidate: x and xbar use different p");
  const double p = x.p();
  const std::size_t extent =
      std::max({system.extent(), x.leading_size(), xbar.leading_size()});
  const auto& support = system.support_union();

  CandidateVerdict verdict;

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const double eta = system[i].offset;
    const double r = system.apply(i, xbar) - eta;
    if (r > tol.feas * (1.0 + std::abs(eta))) add_failure(verdict, "feasibility", i, r);
    if (std::abs(r) <= tol.active * (1.0 + std::abs(eta))) active.push_back(i);
  }
  for (std::size_t k = 0; k < extent; ++k) {
    if (system.in_w(k) && !close(xbar[k], x[k], tol.equation)) {
      add_failure(verdict, "tail", k, xbar[k] - x[k]);
    }
  }
  if (!verdict.failed_conditions.empty()) return verdict;

  // -|xbar_k - x_k|^{p-2}(xbar_k - x_k) on the support.
  auto xi = [&](std::size_t k) { return -duality_map(xbar[k] - x[k], p); };

  std::optional<CandidateVerdict> best_failure;
  auto consider = [&](CandidateVerdict attempt) {
    if (!best_failure ||
        attempt.failed_conditions.size() < best_failure->failed_conditions.size()) {
      best_failure = std::move(attempt);
    }
  };

  const std::size_t max_q = std::min(active.size(), support.size());
  for (std::size_t q = 0; q <= max_q; ++q) {
    std::vector<std::size_t> pick_i(q), pick_r(q);
    for (std::size_t a = 0; a < q; ++a) pick_i[a] = a;
    do {
      std::vector<std::size_t> cons(q);
      for (std::size_t a = 0; a < q; ++a) cons[a] = active[pick_i[a]];
      for (std::size_t a = 0; a < q; ++a) pick_r[a] = a;
      do {
        std::vector<std::size_t> coords(q);
        for (std::size_t a = 0; a < q; ++a) coords[a] = support[pick_r[a]];

        CandidateVerdict attempt;
        attempt.witness_constraints = cons;
        attempt.witness_coordinates = coords;
        std::vector<double> nu;

        if (q > 0) {
          DenseMatrix l(q, q);
          double hadamard = 1.0;
          for (std::size_t a = 0; a < q; ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < q; ++b) {
              l(a, b) = system.coefficient(cons[a], coords[b]);
              row += l(a, b) * l(a, b);
            }
            hadamard *= std::sqrt(row);
          }
          const double det = determinant(l);
          if (std::abs(det) <= tol.det * hadamard || hadamard == 0.0) continue;

          // Coordinate formula: L_{I,R} xbar_R = eta~ with the other
          // coordinates moved to the right-hand side.
          std::vector<double> eta_tilde(q);
          for (std::size_t a = 0; a < q; ++a) {
            double s = system[cons[a]].offset;
            for (const auto& [j, lam] : system[cons[a]].terms) {
              if (!std::binary_search(coords.begin(), coords.end(), j)) s -= lam * xbar[j];
            }
            eta_tilde[a] = s;
          }
          const auto xr = cofactor_numerators(l, eta_tilde);
          for (std::size_t b = 0; b < q; ++b) {
            const double formula = xr[b] / det;
            if (!close(formula, xbar[coords[b]], tol.equation)) {
              add_failure(attempt, "active_formula", coords[b], formula - xbar[coords[b]]);
            }
          }

          // Multipliers: sum_{i in I} lambda^i_k nu~_i = xi_k for k in R.
          std::vector<double> xi_r(q);
          for (std::size_t b = 0; b < q; ++b) xi_r[b] = xi(coords[b]);
          const auto num = cofactor_numerators(l.transposed(), xi_r);
          nu.resize(q);
          for (std::size_t a = 0; a < q; ++a) {
            nu[a] = num[a] / det;
            if (!(nu[a] > tol.pos)) add_failure(attempt, "multiplier_positivity", cons[a], nu[a]);
          }
        }

        // Derivative condition on the support coordinates outside R.
        for (auto j : support) {
          if (std::binary_search(coords.begin(), coords.end(), j)) continue;
          const double lhs = duality_map(xbar[j] - x[j], p);
          double rhs = 0.0, mag = 0.0;
          for (std::size_t a = 0; a < q; ++a) {
            const double term = system.coefficient(cons[a], j) * nu[a];
            rhs -= term;
            mag += std::abs(term);
          }
          if (std::abs(lhs - rhs) > tol.equation * (1.0 + std::abs(lhs) + mag)) {
            add_failure(attempt, "off_support_derivative", j, lhs - rhs);
          }
        }

        if (attempt.failed_conditions.empty()) {
          attempt.accepted = true;
          attempt.multipliers = std::move(nu);
          return attempt;
        }
        consider(std::move(attempt));
      } while (q > 0 && next_combination(pick_r, support.size()));
    } while (q > 0 && next_combination(pick_i, active.size()));
  }

  if (best_failure) {
    best_failure->accepted = false;
    return *best_failure;
  }
  add_failure(verdict, "singular", 0, 0.0);
  return verdict;
}

double directional_derivative_lp(const LpVector& u, const LpVector& v, const LpVector& x) {
  if (u.p() != v.p() || u.p() != x.p()) {
    throw InvalidInput("directional_derivative_lp: operands use different p");
  }
  const std::size_t extent = std::max({u.leading_size(), v.leading_size(), x.leading_size()});
  double s = 0.0;
  for (std::size_t i = 0; i < extent; ++i) s += duality_map(u[i] - x[i], u.p()) * v[i];
  return s;
}

}  // namespace polyproj::lp
