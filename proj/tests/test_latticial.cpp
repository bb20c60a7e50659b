#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace polyproj {
namespace {

LatticialCone cone_of(std::initializer_list<std::vector<double>> basis) {
  std::vector<Vector> b;
  for (const auto& v : basis) b.emplace_back(v);
  return LatticialCone(std::move(b));
}

void expect_vec(const Vector& got, const Vector& want, double tol) {
  EXPECT_LE(testing::dist(got, want), tol) << "got (" << got[0] << ", " << got[1] << ")";
}

TEST(DualGenerators, Examples) {
  {
    const auto d = dual_generators(cone_of({{1, 0}, {0, 1}}));
    expect_vec(d.generators[0], Vector{-1, 0}, 1e-15);
    expect_vec(d.generators[1], Vector{0, -1}, 1e-15);
  }
  {
    const auto d = dual_generators(cone_of({{1, 0}, {1, 1}}));
    expect_vec(d.generators[0], Vector{-1, 1}, 1e-15);
    expect_vec(d.generators[1], Vector{0, -1}, 1e-15);
  }
  {
    const auto d = dual_generators(cone_of({{2, 0}, {0, 1}}));
    expect_vec(d.generators[0], Vector{-0.5, 0}, 1e-15);
    expect_vec(d.generators[1], Vector{0, -1}, 1e-15);
  }
}

TEST(LatticialCone, RejectsBadBases) {
  EXPECT_THROW(cone_of({{1, 2}, {2, 4}}), SingularSystem);
  EXPECT_THROW(cone_of({{1, 0}, {1, 1e-14}}), SingularSystem);
  EXPECT_THROW(cone_of({{1, 0, 0}, {0, 1, 0}}), DimensionMismatch);
}

TEST(DualGeneratorsProperty, BiorthogonalToBasis) {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 200; ++k) {
    const LatticialCone cone = random_cone(rng, 1 + k % 8);
    for (std::size_t j = 0; j < cone.dim(); ++j)
      for (std::size_t i = 0; i < cone.dim(); ++i) {
        const double v = inner(cone.duals().generators[j], cone.basis()[i]);
        EXPECT_NEAR(v, i == j ? -1.0 : 0.0, 1e-10);
      }
  }
}

TEST(ConeMembership, Examples) {
  const auto orthant = cone_of({{1, 0}, {0, 1}});
  EXPECT_TRUE(cone_membership(orthant, Vector{1, 1}, 1e-12));
  EXPECT_FALSE(cone_membership(orthant, Vector{-1, 2}, 1e-12));
  EXPECT_TRUE(cone_membership(cone_of({{1, 0}, {1, 1}}), Vector{2, 1}, 1e-12));
  const auto c = cone_of({{1, 0}, {1, 1}}).coordinates(Vector{2, 1});
  EXPECT_NEAR(c[0], 1.0, 1e-15);
  EXPECT_NEAR(c[1], 1.0, 1e-15);
}

TEST(ProjectCone, Examples) {
  const auto orthant = cone_of({{1, 0}, {0, 1}});
  const auto s = project_cone(orthant, Vector{-1, 2});
  expect_vec(s.y, Vector{0, 2}, 1e-15);
  expect_vec(s.z, Vector{-1, 0}, 1e-15);

  const auto inside = project_cone(orthant, Vector{3, 0.5});
  EXPECT_EQ(inside.y, (Vector{3, 0.5}));
  EXPECT_EQ(inside.z, (Vector{0, 0}));
  EXPECT_FALSE(inside.certificate);

  const auto polar = project_cone(orthant, Vector{-1, -2});
  expect_vec(polar.y, Vector{0, 0}, 1e-15);
  expect_vec(polar.z, Vector{-1, -2}, 1e-15);
}

TEST(MixedRepresentation, Examples) {
  const auto orthant = cone_of({{1, 0}, {0, 1}});
  {
    const auto m = mixed_representation(orthant, Vector{-1, 2});
    EXPECT_EQ(m.support, (IndexSet{0}));
    EXPECT_EQ(m.complement, (IndexSet{1}));
    ASSERT_EQ(m.beta.size(), 1u);
    ASSERT_EQ(m.alpha.size(), 1u);
    EXPECT_NEAR(m.beta[0], 1.0, 1e-15);
    EXPECT_NEAR(m.alpha[0], 2.0, 1e-15);
  }
  {
    const auto m = mixed_representation(orthant, Vector{-1, -2});
    EXPECT_EQ(m.support, (IndexSet{0, 1}));
    EXPECT_TRUE(m.complement.empty());
    EXPECT_NEAR(m.beta[0], 1.0, 1e-15);
    EXPECT_NEAR(m.beta[1], 2.0, 1e-15);
  }
  {
    const auto k = cone_of({{1, 0}, {1, 1}});
    const auto s = project_cone(k, Vector{0, -1});
    expect_vec(s.y, Vector{0, 0}, 1e-15);
    expect_vec(s.z, Vector{0, -1}, 1e-15);
    const auto m = mixed_representation(k, Vector{0, -1});
    EXPECT_EQ(m.support, (IndexSet{1}));
    EXPECT_NEAR(m.beta[0], 1.0, 1e-15);
    EXPECT_NEAR(m.alpha[0], 0.0, 1e-15);
  }
}

TEST(MixedRepresentation, PointInConeIsTrivial) {
  const auto k = cone_of({{1, 0}, {1, 1}});
  const auto m = mixed_representation(k, Vector{2, 1});
  EXPECT_TRUE(m.support.empty());
  EXPECT_EQ(m.complement, (IndexSet{0, 1}));
  EXPECT_NEAR(m.alpha[0], 1.0, 1e-15);
  EXPECT_NEAR(m.alpha[1], 1.0, 1e-15);
}

/// Supports I (including {} and N) whose mixed system has alpha >= 0 and
/// beta > 0, found without the projector.
std::vector<IndexSet> exhaustive_acceptors(const LatticialCone& cone, const Vector& x) {
  const std::size_t n = cone.dim();
  std::vector<IndexSet> out;
  std::vector<IndexSet> candidates{IndexSet{}};
  for (auto& s : testing::all_subsets(n)) candidates.push_back(std::move(s));
  for (const auto& set : candidates) {
    const IndexSet comp = set.complement(n);
    // Columns: b_i for i not in I, then u_j for j in I.
    Eigen::MatrixXd a(n, n);
    std::size_t col = 0;
    for (auto i : comp) {
      for (std::size_t t = 0; t < n; ++t) a(t, col) = cone.basis()[i][t];
      ++col;
    }
    for (auto j : set) {
      for (std::size_t t = 0; t < n; ++t) a(t, col) = cone.duals().generators[j][t];
      ++col;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd c = lu.solve(Eigen::Map<const Eigen::VectorXd>(x.values().data(), n));
    bool ok = true;
    for (std::size_t k = 0; k < comp.size(); ++k) ok = ok && c[k] >= -1e-10;
    for (std::size_t k = comp.size(); k < n; ++k) ok = ok && c[k] > 1e-10;
    if (ok) out.push_back(set);
  }
  return out;
}

TEST(MixedRepresentation, ExampleMatchesExhaustiveSearch) {
  const auto k = cone_of({{1, 0}, {1, 1}});
  const auto all = exhaustive_acceptors(k, Vector{0, -1});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all.front(), mixed_representation(k, Vector{0, -1}).support);
}

TEST(LatticialProperty, MoreauIdentity) {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 200; ++k) {
    const LatticialCone cone = random_cone(rng, 1 + k % 8);
    const Vector x = random_vector(rng, cone.dim(), 2.0);
    const auto s = project_cone(cone, x);
    const double scale = 1 + x.squared_norm();
    EXPECT_LE(testing::dist(s.y + s.z, x), 1e-10 * (1 + x.norm()));
    EXPECT_LE(std::abs(inner(s.y, s.z)), 1e-10 * scale);
    EXPECT_TRUE(cone_membership(cone, s.y, 1e-9 * (1 + x.norm())));
  }
}

TEST(ProjectCone, NearlyDependentDualsStillProject) {
  // Moderate basis condition, but det G / prod G_ii of the duals is tiny.
  std::mt19937_64 draw(62);
  std::optional<LatticialCone> found;
  for (int k = 0; k < 5000 && !found; ++k) {
    LatticialCone c = random_cone(draw, 6);
    const GramMatrix g = build_gram(c.as_polyhedron());
    const IndexSet all = IndexSet::range(6);
    if (subdet(g, all, all) / g.diagonal_product(all) < 1e-12) found.emplace(std::move(c));
  }
  ASSERT_TRUE(found);
  const LatticialCone& cone = *found;
  std::mt19937_64 rng(65);
  for (int k = 0; k < 200; ++k) {
    const Vector x = random_vector(rng, 6, 2.0);
    const auto s = project_cone(cone, x);
    EXPECT_LE(testing::dist(s.y + s.z, x), 1e-10 * (1 + x.norm()));
    const auto all_i = exhaustive_acceptors(cone, x);
    ASSERT_EQ(all_i.size(), 1u);
    EXPECT_EQ(all_i.front(), mixed_representation(cone, x).support);
  }
}

TEST(LatticialProperty, ExactlyOneAcceptingSupport) {
  std::mt19937_64 rng(63);
  int checked = 0;
  for (int k = 0; checked < 100; ++k) {
    ASSERT_LT(k, 1000);
    const LatticialCone cone = random_cone(rng, 2 + k % 5);
    const Vector x = random_vector(rng, cone.dim(), 2.0);
    if (cone_membership(cone, x, 0.0)) continue;
    const auto all = exhaustive_acceptors(cone, x);
    ASSERT_EQ(all.size(), 1u) << "cone " << k;
    const auto m = mixed_representation(cone, x);
    EXPECT_EQ(all.front(), m.support);
    ++checked;
  }
}

TEST(LatticialProperty, BetaIsTheProjectorMultiplier) {
  std::mt19937_64 rng(64);
  for (int k = 0; k < 200; ++k) {
    const LatticialCone cone = random_cone(rng, 1 + k % 8);
    const Vector x = random_vector(rng, cone.dim(), 2.0);
    const auto s = project_cone(cone, x);
    const auto m = mixed_representation(cone, x);
    if (!s.certificate) {
      EXPECT_TRUE(m.support.empty());
      continue;
    }
    ASSERT_EQ(m.support, s.certificate->support);
    for (std::size_t a = 0; a < m.beta.size(); ++a) {
      EXPECT_NEAR(m.beta[a], s.certificate->multipliers[a], 1e-12);
    }
    // z lies in cone{u_j : j in I} with the same coefficients.
    std::vector<double> z(cone.dim(), 0.0);
    for (std::size_t a = 0; a < m.support.size(); ++a)
      for (std::size_t t = 0; t < cone.dim(); ++t)
        z[t] += m.beta[a] * cone.duals().generators[m.support[a]][t];
    EXPECT_LE(testing::dist(Vector(z), s.z), 1e-9 * (1 + x.norm()));
    // y = sum alpha_i b_i.
    std::vector<double> y(cone.dim(), 0.0);
    for (std::size_t a = 0; a < m.complement.size(); ++a) {
      EXPECT_GE(m.alpha[a], -1e-10);
      for (std::size_t t = 0; t < cone.dim(); ++t) y[t] += m.alpha[a] * cone.basis()[m.complement[a]][t];
    }
    EXPECT_LE(testing::dist(Vector(y), s.y), 1e-9 * (1 + x.norm()));
  }
}

TEST(SolveMixedSystem, AllDualColumns) {
  const auto k = cone_of({{1, 0}, {1, 1}});
  const auto m = solve_mixed_system(k, Vector{0, -1}, IndexSet{0, 1});
  ASSERT_TRUE(m);
  EXPECT_NEAR(m->beta[0], 0.0, 1e-15);
  EXPECT_NEAR(m->beta[1], 1.0, 1e-15);
}

}  // namespace
}  // namespace polyproj
