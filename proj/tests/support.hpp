#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "polyproj/polyproj.hpp"

namespace polyproj::testing {

inline Polyhedron make_poly(std::initializer_list<std::pair<std::vector<double>, double>> rows) {
  std::vector<Halfspace> hs;
  for (const auto& [u, eta] : rows) hs.emplace_back(Vector(u), eta);
  return Polyhedron(std::move(hs));
}

/// {h : h_1 <= 0, h_2 <= 0}
inline Polyhedron quadrant() { return make_poly({{{1, 0}, 0}, {{0, 1}, 0}}); }

inline double dist(const Vector& a, const Vector& b) { return (a - b).norm(); }

/// Leibniz expansion; only for tiny matrices.
inline double leibniz_det(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double total = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    double term = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Eigen::MatrixXd gram_block(const Polyhedron& poly, const IndexSet& rows,
                                  const IndexSet& cols) {
  Eigen::MatrixXd m(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      m(a, b) = inner(poly[rows[a]].normal(), poly[cols[b]].normal());
  return m;
}

/// Every nonempty subset of {0..n-1}, by bitmask.
inline std::vector<IndexSet> all_subsets(std::size_t n, std::size_t max_size = 64) {
  std::vector<IndexSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) m.push_back(i);
    if (m.size() <= max_size) out.emplace_back(std::move(m));
  }
  return out;
}

}  // namespace polyproj::testing
