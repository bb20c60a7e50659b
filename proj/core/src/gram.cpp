#include "polyproj/gram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyproj {

IndexSet::IndexSet(std::vector<std::size_t> members) : members_(std::move(members)) {
  for (std::size_t k = 1; k < members_.size(); ++k) {
    if (members_[k - 1] >= members_[k]) {
      throw InvalidInput("index set must be strictly ascending");
    }
  }
}

IndexSet::IndexSet(std::initializer_list<std::size_t> members)
    : IndexSet(std::vector<std::size_t>(members)) {}

IndexSet IndexSet::range(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return IndexSet(std::move(m));
}

bool IndexSet::contains(std::size_t a) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), a);
}

std::size_t IndexSet::count_at_most(std::size_t a) const noexcept {
  return static_cast<std::size_t>(
      std::upper_bound(members_.begin(), members_.end(), a) - members_.begin());
}

IndexSet IndexSet::with(std::size_t a) const {
  if (contains(a)) return *this;
  std::vector<std::size_t> m = members_;
  m.insert(std::upper_bound(m.begin(), m.end(), a), a);
  return IndexSet(std::move(m));
}

IndexSet IndexSet::without(std::size_t a) const {
  std::vector<std::size_t> m;
  m.reserve(members_.size());
  for (auto b : members_)
    if (b != a) m.push_back(b);
  return IndexSet(std::move(m));
}

IndexSet IndexSet::complement(std::size_t n) const {
  std::vector<std::size_t> m;
  for (std::size_t a = 0; a < n; ++a)
    if (!contains(a)) m.push_back(a);
  return IndexSet(std::move(m));
}

void IndexSet::check_bounds(std::size_t n) const {
  if (!members_.empty() && members_.back() >= n) {
    throw InvalidInput("index " + std::to_string(members_.back() + 1) +
                       " out of range 1.." + std::to_string(n));
  }
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (k) s += ", ";
    s += std::to_string(members_[k] + 1);
  }
  return s + "}";
}

GramMatrix GramMatrix::from_entries(DenseMatrix entries) {
  const std::size_t n = entries.rows();
  if (n == 0 || entries.cols() != n) throw InvalidInput("Gram matrix must be square and nonempty");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(entries(i, i)) || entries(i, i) <= 0.0) {
      throw InvalidInput("Gram matrix diagonal must be strictly positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!std::isfinite(entries(i, j)) || entries(i, j) != entries(j, i)) {
        throw InvalidInput("Gram matrix must be symmetric");
      }
    }
  }
  return GramMatrix(std::move(entries));
}

DenseMatrix GramMatrix::block(const IndexSet& rows, const IndexSet& cols) const {
  rows.check_bounds(size());
  cols.check_bounds(size());
  return submatrix(entries_, rows.members(), cols.members());
}

double GramMatrix::diagonal_product(const IndexSet& set) const {
  double p = 1.0;
  for (auto i : set) p *= entries_(i, i);
  return p;
}

GramMatrix build_gram(const Polyhedron& poly) {
  const std::size_t n = poly.size();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = inner(poly[i].normal(), poly[j].normal());
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return GramMatrix(std::move(g));
}

double subdet(const GramMatrix& gram, const IndexSet& rows, const IndexSet& cols) {
  if (rows.size() != cols.size() || rows.empty()) {
    throw DimensionMismatch("subdet needs equally sized, nonempty row and column sets");
  }
  return determinant(gram.block(rows, cols));
}

bool is_singular(const GramMatrix& gram, const IndexSet& set, double det, double tol_det) {
  return std::abs(det) <= tol_det * gram.diagonal_product(set);
}

int sign_factor(const IndexSet& set, std::size_t a) {
  const std::size_t exponent = set.contains(a) ? set.count_at_most(a) : set.size() + 1;
  return exponent % 2 == 0 ? 1 : -1;
}

std::vector<double> nu_in(const GramMatrix& gram, const ResidualVector& w, const IndexSet& set) {
  if (set.empty()) throw InvalidInput("nu_in needs a nonempty index set");
  set.check_bounds(gram.size());
  if (w.size() != gram.size()) throw DimensionMismatch("nu_in: residual vector size");
  if (set.size() == 1) return {w[set[0]]};

  std::vector<double> nu;
  nu.reserve(set.size());
  for (auto i : set) {
    const IndexSet cols = set.without(i);
    double acc = 0.0;
    for (auto j : set) {
      acc += w[j] * sign_factor(set, j) * sign_factor(set, i) *
             subdet(gram, set.without(j), cols);
    }
    nu.push_back(acc);
  }
  return nu;
}

double nu_out(const GramMatrix& gram, const ResidualVector& w, const IndexSet& set,
              std::size_t iprime) {
  if (set.empty()) throw InvalidInput("nu_out needs a nonempty index set");
  if (set.contains(iprime)) throw InvalidInput("nu_out: i' must not belong to I");
  set.check_bounds(gram.size());
  if (iprime >= gram.size()) throw InvalidInput("nu_out: i' out of range");
  if (w.size() != gram.size()) throw DimensionMismatch("nu_out: residual vector size");

  const IndexSet joined = set.with(iprime);
  const int sign_iprime = sign_factor(joined, iprime);
  double acc = 0.0;
  for (auto j : joined) {
    acc += w[j] * sign_factor(joined, j) * sign_iprime * subdet(gram, set, joined.without(j));
  }
  return acc;
}

std::size_t rank_bound(const GramMatrix& gram, double tol_det) {
  if (tol_det < 0) throw InvalidInput("rank_bound: tolerance must be nonnegative");
  const std::size_t n = gram.size();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = gram(i, j) / std::sqrt(gram(i, i) * gram(j, j));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (a(order[r], order[r]) > a(order[best], order[best])) best = r;
    std::swap(order[k], order[best]);
    const std::size_t p = order[k];
    const double pivot = a(p, p);
    if (!(pivot > tol_det)) break;
    ++rank;
    const double root = std::sqrt(pivot);
    for (std::size_t r = k + 1; r < n; ++r) a(order[r], p) /= root;
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c <= r; ++c) {
        const double v = a(order[r], order[c]) - a(order[r], p) * a(order[c], p);
        a(order[r], order[c]) = v;
        a(order[c], order[r]) = v;
      }
    }
  }
  return rank;
}

std::vector<double> cofactor_numerators(const DenseMatrix& m, std::span<const double> rhs) {
  const std::size_t n = m.rows();
  if (m.cols() != n || rhs.size() != n || n == 0) {
    throw DimensionMismatch("cofactor solve needs a square system");
  }
  if (n == 1) return {rhs[0]};
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto drop = [&](std::size_t k) {
    std::vector<std::size_t> v;
    for (auto a : all)
      if (a != k) v.push_back(a);
    return v;
  };
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = drop(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double sign = (i + k) % 2 == 0 ? 1.0 : -1.0;
      const auto rows = drop(k);
      out[i] += rhs[k] * sign * determinant(submatrix(m, rows, cols));
    }
  }
  return out;
}

}  // namespace polyproj
