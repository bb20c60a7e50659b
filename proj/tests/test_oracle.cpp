#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace polyproj {
namespace {

using testing::make_poly;
using testing::quadrant;

TEST(Dykstra, SingleHalfspaceIsExactAfterOneCycle) {
  const auto p = make_poly({{{1, 2, -1}, 0.5}});
  const Vector x{3, 1, 2};
  const auto st = dykstra_run(p, x, 1e-12);
  EXPECT_EQ(st.iterate, project_halfspace(p[0], x));
  EXPECT_LE(st.iterations, 2u);
}

TEST(Dykstra, QuadrantCorner) {
  EXPECT_LE(testing::dist(dykstra(quadrant(), Vector{2, 1}, 1e-10), Vector{0, 0}), 1e-8);
}

TEST(Dykstra, FeasiblePointIsUnchanged) {
  const auto st = dykstra_run(quadrant(), Vector{-1, -3}, 1e-10);
  EXPECT_EQ(st.iterate, (Vector{-1, -3}));
  EXPECT_EQ(st.iterations, 1u);
  EXPECT_EQ(st.displacement, 0.0);
}

TEST(Dykstra, RejectsBadArguments) {
  EXPECT_THROW(dykstra(quadrant(), Vector{1, 1}, 0.0), InvalidInput);
  EXPECT_THROW(dykstra(quadrant(), Vector{1, 1}, 1e-8, 0), InvalidInput);
  EXPECT_THROW(dykstra(quadrant(), Vector{1, 1, 1}, 1e-8), DimensionMismatch);
}

TEST(Dykstra, MaxItersCarriesLastState) {
  // Two halfspaces meeting at a sharp angle converge slowly.
  const auto p = make_poly({{{1, 0.01}, 0}, {{-1, 0.01}, 0}});
  try {
    dykstra_run(p, Vector{0, 5}, 1e-14, 3);
    FAIL() << "expected MaxItersExceeded";
  } catch (const MaxItersExceeded& e) {
    EXPECT_EQ(e.last().iterations, 3u);
    EXPECT_EQ(e.last().corrections.size(), 2u);
    EXPECT_GT(e.last().displacement, 0.0);
  }
}

TEST(Dykstra, CorrectionsAreOutwardNormals) {
  std::mt19937_64 rng(71);
  for (int k = 0; k < 50; ++k) {
    const Instance inst = random_instance(rng, 3, 5);
    const auto st = dykstra_run(inst.poly, inst.point, 1e-10);
    for (std::size_t i = 0; i < inst.poly.size(); ++i) {
      // Each correction is a nonnegative multiple of its normal.
      const Vector& c = st.corrections[i];
      const Vector& u = inst.poly[i].normal();
      const double along = inner(c, u) / u.squared_norm();
      EXPECT_GE(along, -1e-12);
      EXPECT_LE(testing::dist(c, along * u), 1e-9 * (1 + c.norm()));
    }
  }
}

TEST(KktVerify, AcceptsProjectorOutput) {
  const auto p = quadrant();
  const auto res = project(p, Vector{2, 1});
  EXPECT_TRUE(kkt_verify(p, Vector{2, 1}, res.point, res.certificate).accepted);
}

TEST(KktVerify, InfeasiblePointWithEmptySupport) {
  const auto v = kkt_verify(quadrant(), Vector{2, 1}, Vector{2, 1}, std::nullopt);
  EXPECT_FALSE(v.accepted);
  EXPECT_TRUE(v.has("feasibility"));
  EXPECT_FALSE(v.has("stationarity"));
}

TEST(KktVerify, PerturbedMultiplierBreaksStationarity) {
  const auto p = quadrant();
  auto res = project(p, Vector{2, 1});
  res.certificate->multipliers[0] += 0.1;
  const auto v = kkt_verify(p, Vector{2, 1}, res.point, res.certificate);
  EXPECT_FALSE(v.accepted);
  ASSERT_TRUE(v.has("stationarity"));
  for (const auto& viol : v.violations)
    if (viol.condition == "stationarity") EXPECT_NEAR(viol.magnitude, 0.1, 1e-12);
}

TEST(KktVerify, OutOfRangeSupportIndex) {
  SupportCertificate cert{IndexSet{0, 5}, {1.0, 1.0}, 1.0, std::nullopt};
  const auto v = kkt_verify(quadrant(), Vector{2, 1}, Vector{0, 0}, cert);
  EXPECT_TRUE(v.has("index"));
}

TEST(KktVerifyProperty, RejectsEverySingleFieldPerturbation) {
  std::mt19937_64 rng(72);
  const Tolerances tol;
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Instance inst = random_instance(rng, 2 + k % 6, 1 + k % 8);
    const auto res = project(inst.poly, inst.point);
    if (!res.certificate) continue;
    const auto& cert = *res.certificate;
    const Vector& x = inst.point;
    const double stat_band = 10.0 * 1.01 * tol.stat * (1 + x.norm());
    ASSERT_TRUE(kkt_verify(inst.poly, x, res.point, cert).accepted);

    for (std::size_t a = 0; a < cert.support.size(); ++a) {
      const double un = inst.poly[cert.support[a]].normal().norm();
      auto c = cert;
      c.multipliers[a] += stat_band / un;
      EXPECT_TRUE(kkt_verify(inst.poly, x, res.point, c).has("stationarity"));
      c = cert;
      c.multipliers[a] = -std::abs(c.multipliers[a]);
      EXPECT_TRUE(kkt_verify(inst.poly, x, res.point, c).has("positivity"));
      if (cert.support.size() > 1 && cert.multipliers[a] * un > stat_band) {
        std::vector<std::size_t> rest;
        std::vector<double> nu;
        for (std::size_t b = 0; b < cert.support.size(); ++b)
          if (b != a) {
            rest.push_back(cert.support[b]);
            nu.push_back(cert.multipliers[b]);
          }
        c = cert;
        c.support = IndexSet(rest);
        c.multipliers = nu;
        EXPECT_FALSE(kkt_verify(inst.poly, x, res.point, c).accepted);
      }
    }

    double hadamard = 1.0;
    for (auto i : cert.support) hadamard *= inst.poly[i].normal().squared_norm();
    auto c = cert;
    c.det_gii += 10.0 * 1.01 * 1e-8 * hadamard;
    EXPECT_TRUE(kkt_verify(inst.poly, x, res.point, c).has("det_gii"));

    if (cert.residual_bound) {
      c = cert;
      *c.residual_bound += 10.0 * 1.01 * tol.feas * (1 + std::abs(*cert.residual_bound));
      EXPECT_TRUE(kkt_verify(inst.poly, x, res.point, c).has("residual_bound"));
    }

    for (std::size_t t = 0; t < x.dim(); ++t) {
      std::vector<double> moved(res.point.values());
      moved[t] += stat_band;
      EXPECT_FALSE(kkt_verify(inst.poly, x, Vector(moved), cert).accepted);
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ViSpotCheck, TrueProjectionPasses) {
  const auto v = vi_spot_check(quadrant(), Vector{2, 1}, Vector{0, 0}, 100, 7);
  EXPECT_TRUE(v.accepted);
  EXPECT_EQ(v.samples_checked, 100u);
  EXPECT_EQ(v.seed, 7u);
}

TEST(ViSpotCheck, InteriorNonProjectionFails) {
  const auto v = vi_spot_check(quadrant(), Vector{2, 1}, Vector{-1, -1}, 100, 7);
  EXPECT_FALSE(v.accepted);
  EXPECT_TRUE(v.has("variational_inequality"));
  ASSERT_TRUE(v.counterexample);
  EXPECT_TRUE(contains(quadrant(), *v.counterexample, 1e-9));
  EXPECT_GT(inner(Vector{2, 1} - Vector{-1, -1}, *v.counterexample - Vector{-1, -1}), 0.0);
}

TEST(ViSpotCheck, FeasiblePointPassesVacuously) {
  const auto v = vi_spot_check(quadrant(), Vector{-1, -2}, Vector{-1, -2}, 10, 1);
  EXPECT_TRUE(v.accepted);
}

TEST(ViSpotCheck, SameSeedSameVerdict) {
  const auto a = vi_spot_check(quadrant(), Vector{2, 1}, Vector{-0.5, 0}, 50, 99);
  const auto b = vi_spot_check(quadrant(), Vector{2, 1}, Vector{-0.5, 0}, 50, 99);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.samples_checked, b.samples_checked);
  ASSERT_EQ(a.counterexample.has_value(), b.counterexample.has_value());
  if (a.counterexample) EXPECT_EQ(*a.counterexample, *b.counterexample);
}

TEST(CertificateFromCandidate, RecoversProjectorCertificates) {
  std::mt19937_64 rng(73);
  for (int k = 0; k < 200; ++k) {
    const Instance inst = random_instance(rng, 2 + k % 5, 1 + k % 7);
    const auto res = project(inst.poly, inst.point);
    const auto cert = certificate_from_candidate(inst.poly, inst.point, res.point);
    if (!res.certificate) {
      EXPECT_FALSE(cert && !cert->support.empty() && kkt_verify(inst.poly, inst.point, res.point, cert).accepted &&
                   cert->multipliers.empty());
      continue;
    }
    ASSERT_TRUE(cert);
    const auto v = kkt_verify(inst.poly, inst.point, res.point, cert);
    EXPECT_TRUE(v.accepted) << "instance " << k << ": "
                            << (v.violations.empty() ? "" : v.violations.front().condition);
  }
}

TEST(CertificateFromCandidate, NothingActive) {
  EXPECT_FALSE(certificate_from_candidate(quadrant(), Vector{2, 1}, Vector{-1, -1}));
}

}  // namespace
}  // namespace polyproj
