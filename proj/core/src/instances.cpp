#include "polyproj/instances.hpp"

#include <algorithm>
#include <vector>

namespace polyproj {

Vector random_vector(std::mt19937_64& rng, std::size_t dim, double sigma) {
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> v(dim);
  for (auto& c : v) c = gauss(rng);
  return Vector(std::move(v));
}

namespace {

Vector random_normal(std::mt19937_64& rng, std::size_t dim) {
  for (;;) {
    Vector u = random_vector(rng, dim);
    if (u.norm() > 1e-3) return u;
  }
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, std::size_t dim, std::size_t n,
                         const InstanceOptions& opts) {
  std::uniform_real_distribution<double> slack(opts.min_slack, opts.max_slack);
  Vector interior = random_vector(rng, dim);
  std::vector<Halfspace> hs;
  hs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector u = random_normal(rng, dim);
    const double eta = inner(interior, u) + slack(rng);
    hs.emplace_back(std::move(u), eta);
  }
  Vector point = interior + random_vector(rng, dim, opts.spread);
  return {Polyhedron(std::move(hs)), std::move(point), std::move(interior)};
}

Instance random_redundant_instance(std::mt19937_64& rng, std::size_t dim, std::size_t n,
                                   const InstanceOptions& opts) {
  std::uniform_real_distribution<double> slack(opts.min_slack, opts.max_slack);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  Vector interior = random_vector(rng, dim);
  const std::size_t base = std::max<std::size_t>(1, (n + 1) / 2);
  std::vector<Halfspace> hs;
  hs.reserve(n);
  for (std::size_t i = 0; i < base; ++i) {
    Vector u = random_normal(rng, dim);
    const double eta = inner(interior, u) + slack(rng);
    hs.emplace_back(std::move(u), eta);
  }
  for (std::size_t i = base; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, base - 1);
    const Halfspace& src = hs[pick(rng)];
    const double s = scale(rng);
    hs.emplace_back(s * src.normal(), s * src.offset());
  }
  std::shuffle(hs.begin(), hs.end(), rng);
  Vector point = interior + random_vector(rng, dim, opts.spread);
  return {Polyhedron(std::move(hs)), std::move(point), std::move(interior)};
}

LatticialCone random_cone(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (;;) {
    std::vector<Vector> basis;
    basis.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<double> b(dim);
      for (std::size_t d = 0; d < dim; ++d) b[d] = (d == i ? 1.0 : 0.0) + gauss(rng);
      basis.emplace_back(std::move(b));
    }
    DenseMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t d = 0; d < dim; ++d) m(d, i) = basis[i][d];
    PivotedLu lu(m);
    if (!lu.exactly_singular() && lu.pivot_ratio() < 1e3) return LatticialCone(std::move(basis));
  }
}

}  // namespace polyproj
