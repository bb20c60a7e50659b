#include "polyproj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace polyproj {
namespace {

double norm(std::span<const double> v) { return std::sqrt(inner(v, v)); }

/// Least squares min |d - U c| over the columns U = {u_s} by modified
/// Gram-Schmidt. nullopt when the columns are numerically dependent.
struct LeastSquares {
  std::vector<double> coef;
  double residual = 0.0;
  double gram_det = 1.0;  // prod R_kk^2 = det of the Gram block
};

std::optional<LeastSquares> mgs_least_squares(const std::vector<const Vector*>& cols,
                                              std::span<const double> d) {
  const std::size_t k = cols.size();
  const std::size_t dim = d.size();
  std::vector<std::vector<double>> q(k);
  std::vector<std::vector<double>> r(k, std::vector<double>(k, 0.0));
  LeastSquares out;
  for (std::size_t j = 0; j < k; ++j) {
    q[j] = cols[j]->values();
    const double original = cols[j]->norm();
    for (std::size_t i = 0; i < j; ++i) {
      r[i][j] = inner(q[i], q[j]);
      for (std::size_t t = 0; t < dim; ++t) q[j][t] -= r[i][j] * q[i][t];
    }
    r[j][j] = norm(q[j]);
    if (r[j][j] <= 1e-10 * original) return std::nullopt;
    for (double& v : q[j]) v /= r[j][j];
    out.gram_det *= r[j][j] * r[j][j];
  }
  std::vector<double> rhs(k);
  std::vector<double> rem(d.begin(), d.end());
  for (std::size_t j = 0; j < k; ++j) {
    rhs[j] = inner(q[j], rem);
    for (std::size_t t = 0; t < dim; ++t) rem[t] -= rhs[j] * q[j][t];
  }
  out.coef.assign(k, 0.0);
  for (std::size_t j = k; j-- > 0;) {
    double s = rhs[j];
    for (std::size_t i = j + 1; i < k; ++i) s -= r[j][i] * out.coef[i];
    out.coef[j] = s / r[j][j];
  }
  out.residual = norm(rem);
  return out;
}

/// Visits every k-subset of `pool` for k = 1..max_k in lexicographic order
/// until `visit` returns true.
bool for_each_subset(const std::vector<std::size_t>& pool, std::size_t max_k,
                     const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t k) {
    if (chosen.size() == k) return visit(chosen);
    for (std::size_t i = start; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      if (rec(i + 1, k)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t k = 1; k <= std::min(max_k, pool.size()); ++k) {
    if (rec(0, k)) return true;
  }
  return false;
}

}  // namespace

DykstraState dykstra_run(const Polyhedron& poly, const Vector& x, double tol,
                         std::size_t max_iters) {
  if (!(tol > 0)) throw InvalidInput("dykstra: tolerance must be positive");
  if (max_iters < 1) throw InvalidInput("dykstra: max_iters must be at least 1");
  if (x.dim() != poly.dim()) throw DimensionMismatch("dykstra: point and polyhedron dimensions");

  const std::size_t n = poly.size();
  const std::size_t dim = x.dim();
  std::vector<double> cur(x.values());
  std::vector<std::vector<double>> corr(n, std::vector<double>(dim, 0.0));
  std::vector<double> shifted(dim);
  std::vector<double> projected(dim);

  auto snapshot = [&](std::size_t iters, double disp) {
    std::vector<Vector> c;
    c.reserve(n);
    for (const auto& p : corr) c.emplace_back(p);
    return DykstraState{Vector(cur), std::move(c), iters, disp};
  };

  // The iterate can leave and return within one cycle while the corrections
  // still change, so the displacement is the path length over the cycle.
  double disp = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= max_iters; ++it) {
    disp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < dim; ++t) shifted[t] = cur[t] + corr[i][t];
      projected = shifted;
      project_halfspace(poly[i], std::span<double>(projected));
      double step = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        corr[i][t] = shifted[t] - projected[t];
        step += (projected[t] - cur[t]) * (projected[t] - cur[t]);
      }
      disp += std::sqrt(step);
      std::swap(cur, projected);
    }
    if (disp < tol) return snapshot(it, disp);
  }
  throw MaxItersExceeded("dykstra: no convergence within " + std::to_string(max_iters) + " cycles",
                         snapshot(max_iters, disp));
}

Vector dykstra(const Polyhedron& poly, const Vector& x, double tol, std::size_t max_iters) {
  return dykstra_run(poly, x, tol, max_iters).iterate;
}

bool Verdict::has(const std::string& condition) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.condition == condition; });
}

void Verdict::add(std::string condition, std::optional<std::size_t> index, double magnitude) {
  accepted = false;
  violations.push_back({std::move(condition), index, magnitude});
}

Verdict kkt_verify(const Polyhedron& poly, const Vector& x, const Vector& xbar,
                   const std::optional<SupportCertificate>& cert, const Tolerances& tol) {
  if (x.dim() != poly.dim() || xbar.dim() != poly.dim()) {
    throw DimensionMismatch("kkt_verify: point and polyhedron dimensions");
  }
  Verdict v;
  const std::size_t n = poly.size();

  if (cert) {
    if (cert->multipliers.size() != cert->support.size()) {
      v.add("index", std::nullopt, static_cast<double>(cert->multipliers.size()));
      return v;
    }
    for (auto i : cert->support) {
      if (i >= n) {
        v.add("index", i, static_cast<double>(i));
        return v;
      }
    }
  }

  if (cert) {
    for (std::size_t k = 0; k < cert->support.size(); ++k) {
      if (!(cert->multipliers[k] > 0.0)) v.add("positivity", cert->support[k], cert->multipliers[k]);
    }
    std::vector<const Vector*> cols;
    for (auto i : cert->support) cols.push_back(&poly[i].normal());
    const std::vector<double> none(x.dim(), 0.0);
    const auto fit = mgs_least_squares(cols, none);
    const double det = fit ? fit->gram_det : 0.0;
    double hadamard = 1.0;
    for (const Vector* u : cols) hadamard *= u->squared_norm();
    if (!(cert->det_gii > 0.0) || std::abs(cert->det_gii - det) > 1e-8 * hadamard) {
      v.add("det_gii", std::nullopt, cert->det_gii - det);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double r = inner(xbar, poly[i].normal()) - poly[i].offset();
    if (!within_feasibility(r, poly[i].offset(), tol.feas)) v.add("feasibility", i, r);
    if (cert && cert->support.contains(i) &&
        !within_feasibility(std::abs(r), poly[i].offset(), tol.feas)) {
      v.add("complementarity", i, r);
    }
  }

  if (cert) {
    std::optional<double> bound;
    for (std::size_t i = 0; i < n; ++i) {
      if (cert->support.contains(i)) continue;
      const double r = inner(xbar, poly[i].normal()) - poly[i].offset();
      bound = bound ? std::max(*bound, r) : r;
    }
    if (bound.has_value() != cert->residual_bound.has_value()) {
      v.add("residual_bound", std::nullopt, bound.value_or(0.0));
    } else if (bound && std::abs(*bound - *cert->residual_bound) > tol.feas * (1.0 + std::abs(*bound))) {
      v.add("residual_bound", std::nullopt, *cert->residual_bound - *bound);
    }
  }

  std::vector<double> gap(x.dim());
  for (std::size_t t = 0; t < x.dim(); ++t) gap[t] = x[t] - xbar[t];
  if (cert) {
    for (std::size_t k = 0; k < cert->support.size(); ++k) {
      const auto& u = poly[cert->support[k]].normal();
      for (std::size_t t = 0; t < x.dim(); ++t) gap[t] -= cert->multipliers[k] * u[t];
    }
  }
  const double stat = norm(gap);
  if (stat > tol.stat * (1.0 + x.norm())) v.add("stationarity", std::nullopt, stat);
  return v;
}

Verdict vi_spot_check(const Polyhedron& poly, const Vector& x, const Vector& xbar,
                      std::size_t samples, std::uint64_t seed) {
  if (x.dim() != poly.dim() || xbar.dim() != poly.dim()) {
    throw DimensionMismatch("vi_spot_check: point and polyhedron dimensions");
  }
  Verdict v;
  v.seed = seed;
  const std::size_t dim = x.dim();
  const Vector d = x - xbar;
  const double dn = d.norm();
  if (dn == 0.0) {
    v.samples_checked = samples;
    return v;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.5 * (1.0 + dn);

  std::size_t produced = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    // Alternate between perturbing xbar and perturbing points on the segment
    // towards x, where a wrong candidate is most exposed.
    const double t = (s % 2 == 0) ? 0.0 : unit(rng);
    std::vector<double> c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = xbar[k] + t * d[k] + radius * gauss(rng);

    std::optional<Vector> h;
    try {
      h = dykstra(poly, Vector(std::move(c)), 1e-12, 200'000);
    } catch (const MaxItersExceeded&) {
      continue;
    }
    ++produced;
    const Vector step = *h - xbar;
    const double value = inner(d, step);
    if (value > 1e-8 * (1.0 + dn * step.norm())) {
      v.add("variational_inequality", std::nullopt, value);
      v.counterexample = *h;
      break;
    }
  }
  v.samples_checked = produced;
  if (produced == 0 && samples > 0) {
    throw Error("vi_spot_check: could not produce any feasible sample point");
  }
  return v;
}

std::optional<SupportCertificate> certificate_from_candidate(const Polyhedron& poly,
                                                             const Vector& x, const Vector& xbar,
                                                             const Tolerances& tol) {
  if (x.dim() != poly.dim() || xbar.dim() != poly.dim()) {
    throw DimensionMismatch("certificate_from_candidate: point and polyhedron dimensions");
  }
  const std::size_t n = poly.size();
  std::vector<double> res(n);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    res[i] = inner(xbar, poly[i].normal()) - poly[i].offset();
    if (within_feasibility(std::abs(res[i]), poly[i].offset(), tol.feas)) active.push_back(i);
  }
  if (active.empty()) return std::nullopt;

  const Vector d = x - xbar;
  const double target = tol.stat * (1.0 + x.norm());

  struct Attempt {
    std::vector<std::size_t> members;
    LeastSquares fit;
  };
  std::optional<Attempt> exact;
  std::optional<Attempt> closest;
  for_each_subset(active, x.dim(), [&](const std::vector<std::size_t>& subset) {
    std::vector<const Vector*> cols;
    for (auto i : subset) cols.push_back(&poly[i].normal());
    auto fit = mgs_least_squares(cols, d.coords());
    if (!fit) return false;
    const bool positive =
        std::all_of(fit->coef.begin(), fit->coef.end(), [](double c) { return c > 0.0; });
    if (positive && fit->residual <= target) {
      exact = Attempt{subset, *fit};
      return true;
    }
    if (!closest || fit->residual < closest->fit.residual) closest = Attempt{subset, *fit};
    return false;
  });

  const Attempt& pick = exact ? *exact : *closest;
  SupportCertificate cert{IndexSet(pick.members), pick.fit.coef, pick.fit.gram_det, std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.support.contains(i)) continue;
    cert.residual_bound = cert.residual_bound ? std::max(*cert.residual_bound, res[i]) : res[i];
  }
  return cert;
}

}  // namespace polyproj
