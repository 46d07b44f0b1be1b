#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qedcs/errors.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/oracle.hpp"
#include "qedcs_app/experiments.hpp"

namespace qedcs {
namespace {

constexpr double kMass = 1.0;

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

std::vector<CFourVector> wset() { return app::read_wset(std::string(QEDCS_SOURCE_DIR) + "/data/wset_v1.csv"); }

TEST(MassShellQuadrature, PureImaginaryTimeArgumentMatchesClosedForm) {
  const double t = 2.0;
  const CFourVector w(cd(0.0, -t), 0.0, 0.0, 0.0);
  // r(w) = t, so D = -(m^3 / 2 pi^2) K1(m t) / (m t).
  const double expected = -std::pow(kMass, 3) / (2.0 * std::numbers::pi * std::numbers::pi) *
                          std::cyl_bessel_k(1.0, kMass * t) / (kMass * t);
  EXPECT_LE(rel(oracle::d_quadrature(w, {}), cd(expected, 0.0)), 1e-7);
}

TEST(MassShellQuadrature, InvariantUnderSpatialRotation) {
  const CFourVector w(cd(0.3, -1.1), cd(0.4, 0.1), cd(-0.2, 0.05), cd(0.6, -0.2));
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
  CFourVector v = w;
  v.tail<3>() = R.cast<cd>() * w.tail<3>();
  EXPECT_LE(rel(oracle::d_quadrature(v, {}), oracle::d_quadrature(w, {})), 1e-9);
}

TEST(MassShellQuadrature, AgreesWithClosedFormOnValidationSet) {
  const std::vector<CFourVector> ws = wset();
  ASSERT_EQ(ws.size(), 20u);
  for (const CFourVector& w : ws) {
    EXPECT_LE(rel(oracle::d_quadrature(w, {}), d_eval(w, kMass).D), 1e-6);
    const SpinorMatrix pq = oracle::pminus_quadrature(w, {});
    const SpinorMatrix pc = p_minus(w, kMass);
    EXPECT_LE((pq - pc).norm() / pc.norm(), 1e-6);
  }
}

TEST(MassShellQuadrature, PanelDoublingIsSelfConsistent) {
  oracle::MassShellQuadrature fine;
  fine.panels_per_period = 4;
  for (const CFourVector& w : wset())
    EXPECT_LE(rel(oracle::d_quadrature(w, {}), oracle::d_quadrature(w, fine)), 1e-9);
}

TEST(MassShellQuadrature, RestFrameKernelCommutesWithGammaZero) {
  const SpinorMatrix p = oracle::pminus_quadrature(CFourVector(cd(0.0, -1.5), 0.0, 0.0, 0.0), {});
  EXPECT_LE((p * gamma(0) - gamma(0) * p).norm(), 1e-10 * p.norm());
  // gamma^0 p^- is hermitian for purely imaginary time-like arguments.
  const SpinorMatrix g0p = gamma(0) * p;
  EXPECT_LE((g0p - g0p.adjoint()).norm(), 1e-10 * p.norm());
}

TEST(MassShellQuadrature, RejectsArgumentsWithoutPastDirectedImaginaryPart) {
  EXPECT_THROW(oracle::d_quadrature(CFourVector(1.0, 2.0, 0.0, 0.0), {}), DomainError);
  EXPECT_THROW(oracle::d_quadrature(CFourVector(0.0, cd(0.0, 1.0), 0.0, 0.0), {}), DomainError);
  EXPECT_THROW(oracle::d_quadrature(CFourVector(cd(0.0, 1.0), 0.0, 0.0, 0.0), {}), DomainError);
}

}  // namespace
}  // namespace qedcs
