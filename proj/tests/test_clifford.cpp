#include <random>

#include <gtest/gtest.h>

#include "qedcs/clifford.hpp"
#include "qedcs/errors.hpp"

namespace qedcs {
namespace {

FourVector e(int mu) {
  FourVector v = FourVector::Zero();
  v[mu] = 1.0;
  return v;
}

TEST(MinkowskiDot, TimeUnitVectorIsPositive) { EXPECT_EQ(minkowski_dot(e(0), e(0)), 1.0); }

TEST(MinkowskiDot, SpaceUnitVectorIsNegative) { EXPECT_EQ(minkowski_dot(e(1), e(1)), -1.0); }

TEST(MinkowskiDot, LightLikeVectorIsNull) {
  const FourVector v(1.0, 1.0, 0.0, 0.0);
  EXPECT_EQ(minkowski_dot(v, v), 0.0);
}

TEST(Radius, UnitSpaceLikeVector) {
  const cd r = radius(complexify(e(1), 0.0, e(0)));
  EXPECT_NEAR(r.real(), 1.0, 1e-15);
  EXPECT_NEAR(r.imag(), 0.0, 1e-15);
}

TEST(Radius, RegularizedRealPartBound) {
  const double eps = 0.1;
  const cd r = radius(complexify(e(1), eps, -e(0)));
  EXPECT_GE(r.real(), std::max(1.0, eps));
}

TEST(Radius, RealTimeLikeArgumentIsRejected) {
  EXPECT_THROW(radius(complexify(FourVector(0.5, 0, 0, 0), 0.0, e(0))), DomainError);
}

TEST(Radius, LightLikeArgumentIsRejected) {
  EXPECT_THROW(radius(complexify(FourVector(1.0, 1.0, 0, 0), 0.0, e(0))), DomainError);
}

TEST(Slash, TimeUnitVectorGivesGammaZero) { EXPECT_EQ(slash(e(0)), gamma(0)); }

TEST(Slash, SquareIsMinkowskiNorm) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    const FourVector v(g(rng), g(rng), g(rng), g(rng));
    const SpinorMatrix s = slash(v);
    EXPECT_LE((s * s - minkowski_dot(v, v) * SpinorMatrix::Identity()).norm(), 1e-13);
  }
}

TEST(Slash, IsLinear) {
  const FourVector u(0.3, -1.2, 0.5, 2.0), v(-0.7, 0.1, 0.9, -0.4);
  EXPECT_LE((slash(FourVector(u + v)) - slash(u) - slash(v)).norm(), 1e-15);
}

TEST(Slash, CovectorFormMatchesLoweredVector) {
  const FourVector v(0.3, -1.2, 0.5, 2.0);
  EXPECT_LE((slash(v) - slash_covector(lower(v))).norm(), 1e-15);
}

TEST(Gamma, AnticommutatorsGiveMetric) {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const SpinorMatrix ac = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu);
      EXPECT_LE((ac - 2.0 * metric()(mu, nu) * SpinorMatrix::Identity()).norm(), 1e-15) << mu << nu;
    }
}

TEST(Gamma, DiracAdjointRelation) {
  for (int mu = 0; mu < 4; ++mu)
    EXPECT_LE((gamma(0) * gamma(mu).adjoint() * gamma(0) - gamma(mu)).norm(), 1e-15) << mu;
}

TEST(Gamma, DiracRepresentationIsPinned) {
  SpinorMatrix g0 = SpinorMatrix::Zero();
  g0.diagonal() << 1.0, 1.0, -1.0, -1.0;
  EXPECT_EQ(gamma(0), g0);
  // gamma^1 = [[0, sigma_1], [-sigma_1, 0]].
  EXPECT_EQ(gamma(1)(0, 3), cd(1.0, 0.0));
  EXPECT_EQ(gamma(1)(3, 0), cd(-1.0, 0.0));
  // gamma^2 carries sigma_2 = [[0, -i], [i, 0]].
  EXPECT_EQ(gamma(2)(0, 3), cd(0.0, -1.0));
}

TEST(Boost, ZeroRapidityIsIdentity) {
  const LorentzBoost b = boost(0.0, 2);
  EXPECT_EQ(b.Lambda, RealMatrix4::Identity());
  EXPECT_LE((b.S - SpinorMatrix::Identity()).norm(), 1e-15);
}

TEST(Boost, PreservesMetric) {
  const LorentzBoost b = boost(0.7, 1);
  EXPECT_LE((b.Lambda.transpose() * metric() * b.Lambda - metric()).norm(), 1e-12);
  EXPECT_GE(b.Lambda(0, 0), 1.0);
}

TEST(Boost, SpinorRepresentationIntertwinesGammas) {
  for (int axis = 1; axis <= 3; ++axis) {
    const LorentzBoost b = boost(0.7, axis);
    const RealMatrix4 inv = b.inverse();
    const SpinorMatrix Sinv = b.S.inverse();
    for (int mu = 0; mu < 4; ++mu) {
      SpinorMatrix rhs = SpinorMatrix::Zero();
      for (int nu = 0; nu < 4; ++nu) rhs += inv(mu, nu) * gamma(nu);
      EXPECT_LE((b.S * gamma(mu) * Sinv - rhs).norm(), 1e-12) << axis << mu;
    }
  }
}

TEST(Boost, DiracAdjointOfSIsInverse) {
  const LorentzBoost b = boost(-0.9, 3);
  EXPECT_LE((gamma(0) * b.S.adjoint() * gamma(0) - b.S.inverse()).norm(), 1e-14);
}

TEST(Boost, RejectsHugeRapidity) { EXPECT_THROW(boost(6.0, 1), ConfigError); }

TEST(RadiusInequalities, HoldOnRandomSamples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const FourVector zs(0.0, U(rng), U(rng), U(rng));
    const double zn = zs.tail<3>().norm();
    const FourVector z(0.5 * zn * U(rng), zs[1], zs[2], zs[3]);
    const double a = 0.8 * std::abs(U(rng));
    const FourVector u = -FourVector(std::cosh(a), std::sinh(a), 0.0, 0.0);
    const double eps = 0.5 * std::abs(U(rng));
    const CFourVector w = complexify(z, eps, u);
    const double rz = std::sqrt(-minkowski_dot(z, z));
    const double uu = minkowski_dot(u, u);
    const cd r = radius(w);
    EXPECT_GE(r.real() * (1 + 1e-12), std::max(rz, eps * std::sqrt(uu)));
    EXPECT_LE(w.norm() / std::abs(r), (1 + 1e-12) * (u.norm() / std::sqrt(uu)) * (z.norm() / rz));
  }
}

}  // namespace
}  // namespace qedcs
