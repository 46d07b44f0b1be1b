#include <cmath>

#include <gtest/gtest.h>

#include "qedcs/errors.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/operators.hpp"

namespace qedcs {
namespace {

constexpr double kMass = 1.0;

std::shared_ptr<BumpField> test_field() {
  return std::make_shared<BumpField>(
      std::vector<BumpField::Term>{{FourVector(0.5, 0.3, -0.2, 0.1), Bump{FourVector::Zero(), 1.2}}});
}

GridPtr flat_periodic(int N, double L = 1.5) {
  return make_grid(std::make_shared<FlatSurface>(), L, N, QuadratureRule::Midpoint, true);
}

GridPtr curved(int N, double L = 1.5) { return make_grid(std::make_shared<GaussianBumpSurface>(0.3, 1.0), L, N); }

DiscretizedOperator adjoint(const DiscretizedOperator& op) {
  DiscretizedOperator out = op;
  out.matrix = denormalized(*op.grid, normalized(op).adjoint());
  return out;
}

DiscretizedOperator identity(GridPtr g) {
  DiscretizedOperator out;
  out.grid = g;
  out.matrix = linalg::Matrix::Identity(static_cast<Eigen::Index>(g->dim()), static_cast<Eigen::Index>(g->dim()));
  return out;
}

TEST(Assemble, ZeroKernelGivesZeroOperator) {
  GridPtr g = curved(4);
  const DiscretizedOperator op =
      assemble([](std::size_t, std::size_t) { return SpinorMatrix::Zero().eval(); }, g, DiagonalRule::Limit);
  EXPECT_EQ(op.matrix.norm(), 0.0);
  EXPECT_EQ(hs_norm(op), 0.0);
}

TEST(Assemble, DeltaPOfZeroFieldIsZero) {
  EXPECT_EQ(delta_p(curved(4), *zero_field(), kMass).matrix.norm(), 0.0);
}

TEST(Assemble, WeightConventionIsBlockKernelTimesGammaWeight) {
  GridPtr g = curved(4);
  const DiscretizedOperator op = delta_p(g, *test_field(), kMass);
  const std::size_t i = 5, j = 40;
  KernelPoint pt;
  pt.x = g->points[i];
  pt.y = g->points[j];
  const SpinorMatrix expected = delta_p_kernel(*test_field(), pt, kMass) * g->Gamma[j] * g->weights[j];
  EXPECT_LE((op.matrix.block<4, 4>(4 * i, 4 * j) - expected).norm(), 1e-15 * expected.norm());
  EXPECT_EQ((op.matrix.block<4, 4>(4 * i, 4 * i).norm()), 0.0);
}

TEST(Assemble, IsLinearInTheKernel) {
  GridPtr g = curved(4);
  auto k1 = [&](std::size_t i, std::size_t j) {
    return SpinorMatrix(p_minus(complexify(g->displacement(i, j), 0.3, default_u()), kMass));
  };
  auto k2 = [&](std::size_t i, std::size_t j) {
    return SpinorMatrix(cd(0.0, 0.5) * p_minus(complexify(g->displacement(i, j), 0.2, default_u()), kMass));
  };
  const DiscretizedOperator a = assemble(k1, g, DiagonalRule::Limit), b = assemble(k2, g, DiagonalRule::Limit);
  const DiscretizedOperator c =
      assemble([&](std::size_t i, std::size_t j) { return SpinorMatrix(k1(i, j) + k2(i, j)); }, g, DiagonalRule::Limit);
  EXPECT_LE(((a + b).matrix - c.matrix).norm(), 1e-15 * c.matrix.norm());
}

TEST(Assemble, KernelDomainErrorCarriesIndices) {
  GridPtr g = curved(4);
  auto bad = [](std::size_t, std::size_t) -> SpinorMatrix { throw DomainError("boom"); };
  try {
    assemble(bad, g, DiagonalRule::Limit);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("("), std::string::npos);
  }
}

// Row of Delta P at one node applied to a constant spinor, summed over a grid of
// N per axis with the evaluation node excluded.
Eigen::Vector4cd delta_p_row(const VectorPotential& A, SurfacePtr s, double L, int N, const Vec3& x0) {
  GridPtr g = make_grid(s, L, N);
  const Eigen::Vector4cd psi(1.0, 0.0, 0.0, 0.0);
  Eigen::Vector4cd acc = Eigen::Vector4cd::Zero();
  KernelPoint pt;
  pt.x = embed(*s, x0);
  for (std::size_t j = 0; j < g->size(); ++j) {
    if ((g->nodes[j] - x0).norm() < 1e-12) continue;
    pt.y = g->points[j];
    acc += delta_p_kernel(A, pt, kMass) * g->Gamma[j] * psi * g->weights[j];
  }
  return acc;
}

TEST(Assemble, DeltaPActionConvergesToFineQuadrature) {
  auto A = test_field();
  SurfacePtr s = std::make_shared<GaussianBumpSurface>(0.3, 1.0);
  const double L = 1.5;
  std::vector<double> errors;
  for (int N : {4, 8, 12}) {
    const double h = 2.0 * L / N;
    const int c = N / 2;
    const Vec3 x0(-L + (c + 0.5) * h, -L + (c + 0.5) * h, -L + (c + 0.5) * h);
    // Fine grids 3N and 5N contain the node; extrapolate their first-order error away.
    const Eigen::Vector4cd f3 = delta_p_row(*A, s, L, 3 * N, x0), f5 = delta_p_row(*A, s, L, 5 * N, x0);
    const Eigen::Vector4cd ref = (5.0 * f5 - 3.0 * f3) / 2.0;
    Eigen::Vector4cd coarse;
    if (N <= 8) {
      GridPtr g = make_grid(s, L, N);
      const DiscretizedOperator op = delta_p(g, *A, kMass);
      std::size_t i = 0;
      while ((g->nodes[i] - x0).norm() > 1e-12) ++i;
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g->dim()));
      for (std::size_t j = 0; j < g->size(); ++j) psi[static_cast<Eigen::Index>(4 * j)] = 1.0;
      coarse = (op.matrix * psi).segment<4>(static_cast<Eigen::Index>(4 * i));
      EXPECT_LE((coarse - delta_p_row(*A, s, L, N, x0)).norm(), 1e-14 * coarse.norm());
    } else {
      coarse = delta_p_row(*A, s, L, N, x0);
    }
    errors.push_back((coarse - ref).norm() / ref.norm());
  }
  // First-order decrease from the excluded diagonal cell.
  EXPECT_LT(errors[1], 0.65 * errors[0]);
  EXPECT_LT(errors[2], 0.8 * errors[1]);
  EXPECT_LT(errors[2], 0.2);
}

TEST(HsNorm, ZeroOperator) {
  DiscretizedOperator op;
  op.grid = curved(4);
  op.matrix = linalg::Matrix::Zero(256, 256);
  EXPECT_EQ(hs_norm(op), 0.0);
}

TEST(HsNorm, FlatSurfaceIsWeightedFrobeniusNorm) {
  GridPtr g = make_grid(std::make_shared<FlatSurface>(), 1.5, 4);
  const DiscretizedOperator op = delta_p(g, *test_field(), kMass);
  double s = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i)
    for (std::size_t j = 0; j < g->size(); ++j) {
      if (i == j) continue;
      KernelPoint pt;
      pt.x = g->points[i];
      pt.y = g->points[j];
      s += g->weights[i] * g->weights[j] * delta_p_kernel(*test_field(), pt, kMass).squaredNorm();
    }
  EXPECT_NEAR(hs_norm(op), std::sqrt(s), 1e-13 * std::sqrt(s));
}

TEST(HsNorm, SeparableKernelFactorizes) {
  GridPtr g = make_grid(std::make_shared<FlatSurface>(), 2.0, 6, QuadratureRule::Gauss);
  const SpinorMatrix M = SpinorMatrix::Identity() + cd(0.0, 0.3) * gamma(1);
  auto a = [](const FourVector& x) { return std::exp(-x.tail<3>().squaredNorm()); };
  auto b = [](const FourVector& x) { return std::exp(-2.0 * x.tail<3>().squaredNorm()); };
  const DiscretizedOperator op = assemble(
      [&](std::size_t i, std::size_t j) { return SpinorMatrix(a(g->points[i]) * b(g->points[j]) * M); }, g,
      DiagonalRule::Limit);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    sa += g->weights[i] * std::pow(a(g->points[i]), 2);
    sb += g->weights[i] * std::pow(b(g->points[i]), 2);
  }
  const double expected = M.norm() * std::sqrt(sa * sb);
  EXPECT_NEAR(hs_norm(op), expected, 1e-12 * expected);
}

TEST(HsNorm, KernelStreamingMatchesAssembly) {
  GridPtr g = curved(4);
  auto A = test_field();
  const double streamed = hs_norm_kernel(
      [&](std::size_t i, std::size_t j) {
        KernelPoint pt;
        pt.x = g->points[i];
        pt.y = g->points[j];
        return delta_p_kernel(*A, pt, kMass);
      },
      *g);
  const double assembled = hs_norm(delta_p(g, *A, kMass));
  EXPECT_NEAR(streamed, assembled, 1e-12 * assembled);
}

TEST(HsReport, NormOrderingAndSingularValueOrder) {
  const DiscretizedOperator op = delta_p(curved(4), *test_field(), kMass);
  const HSReport r = hs_report(op, 20, false);
  EXPECT_GE(r.hs_norm, r.op_norm);
  EXPECT_GT(r.op_norm, 0.0);
  for (std::size_t k = 1; k < r.top_singular_values.size(); ++k)
    EXPECT_LE(r.top_singular_values[k], r.top_singular_values[k - 1]);
  EXPECT_NEAR(r.top_singular_values[0], r.op_norm, 1e-12);
}

TEST(HsReport, SingularValueTailDecays) {
  const DiscretizedOperator op = delta_p(curved(6), *test_field(), kMass);
  const std::vector<double> s = singular_values(op, 50);
  ASSERT_EQ(s.size(), 50u);
  double C = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) C = std::max(C, s[k] * std::sqrt(double(k + 1)) / s[0]);
  EXPECT_LE(C, 3.0);
  std::vector<double> ks, tail;
  for (std::size_t k = 9; k < s.size(); ++k) {
    ks.push_back(double(k + 1));
    tail.push_back(s[k]);
  }
  EXPECT_LT(loglog_slope(ks, tail), 0.0);
}

TEST(FlatOracle, ZeroMomentumSymbolIsRestFrameProjector) {
  const SpinorMatrix L0 = negative_energy_symbol(Vec3::Zero(), kMass);
  const SpinorMatrix expected = 0.5 * (SpinorMatrix::Identity() - gamma(0));
  EXPECT_LE((L0 - expected).norm(), 1e-15);
  EXPECT_NEAR(L0.trace().real(), 2.0, 1e-15);
}

TEST(FlatOracle, IsAnExactProjector) {
  const DiscretizedOperator P = pminus_flat_oracle(flat_periodic(6), kMass);
  EXPECT_LE(projector_defect(P), 1e-12);
  EXPECT_LE(self_adjoint_defect(P), 1e-12);
  EXPECT_LE(periodic_projector_defect(P, kMass), 1e-12);
}

TEST(FlatOracle, RejectsCurvedSurface) { EXPECT_THROW(pminus_flat_oracle(curved(4), kMass), ConfigError); }

TEST(FlatOracle, RegularizedAssemblyApproachesOracle) {
  GridPtr g = flat_periodic(8, 1.0);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  double previous = 1e300;
  for (double eps : {0.8, 0.4}) {
    double off = 0.0;
    const double d = periodic_op_norm(pminus_regularized(g, eps, kMass) - P, kMass, &off);
    EXPECT_LT(d, previous) << eps;
    EXPECT_LE(off, 1e-10);
    previous = d;
  }
}

TEST(PLambda, ZeroFieldGivesFreeProjector) {
  GridPtr g = flat_periodic(4);
  EXPECT_LE((p_lambda(g, *zero_field(), kMass).matrix - pminus_flat_oracle(g, kMass).matrix).norm(), 1e-15);
}

TEST(PLambda, IsSelfAdjoint) {
  EXPECT_LE(self_adjoint_defect(p_lambda(flat_periodic(5), *test_field(), kMass)), 1e-10);
  EXPECT_LE(self_adjoint_defect(delta_p(curved(4), *test_field(), kMass)), 1e-10);
}

TEST(PLambda, SquareOfDifferenceGrowsSlowerThanDifference) {
  auto A = test_field();
  std::vector<double> sq, hs2;
  for (int N : {4, 6}) {
    const DiscretizedOperator dp = delta_p(curved(N), *A, kMass);
    sq.push_back(hs_norm(adjoint(dp) * dp));
    hs2.push_back(std::pow(hs_norm(dp), 2));
  }
  EXPECT_LT(sq[1] / sq[0], hs2[1] / hs2[0]);
}

TEST(QCommutator, ZeroFieldGivesZero) {
  GridPtr g = flat_periodic(4);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  EXPECT_LE(q_commutator(p_lambda(g, *zero_field(), kMass), P).matrix.norm(), 1e-14);
}

TEST(QCommutator, SkewAdjointWithOffDiagonalBlocks) {
  GridPtr g = flat_periodic(5);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  const DiscretizedOperator Q = q_commutator(p_lambda(g, *test_field(), kMass), P);
  EXPECT_LE(skew_adjoint_defect(Q), 1e-10);
  FlatSpectralBasis basis(g, kMass);
  const linalg::Matrix S = basis.to_spectral(normalized(Q));
  const Eigen::Index n = static_cast<Eigen::Index>(basis.half());
  EXPECT_LE(S.topLeftCorner(n, n).norm() + S.bottomRightCorner(n, n).norm(), 1e-10);
  EXPECT_GT(S.topRightCorner(n, n).norm(), 1e-3);
}

TEST(QCommutator, RejectsDifferentGrids) {
  const DiscretizedOperator a = pminus_flat_oracle(flat_periodic(4), kMass);
  const DiscretizedOperator b = pminus_flat_oracle(flat_periodic(4), kMass);
  EXPECT_THROW(q_commutator(a, b), GridMismatch);
}

TEST(ExpUnitary, ZeroGivesIdentity) {
  GridPtr g = flat_periodic(4);
  DiscretizedOperator Q;
  Q.grid = g;
  Q.matrix = linalg::Matrix::Zero(static_cast<Eigen::Index>(g->dim()), static_cast<Eigen::Index>(g->dim()));
  EXPECT_LE((exp_unitary(Q).matrix - identity(g).matrix).norm(), 1e-14);
}

TEST(ExpUnitary, IsUnitaryAndInvertedByNegation) {
  GridPtr g = flat_periodic(5);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  const DiscretizedOperator Q = q_commutator(p_lambda(g, *test_field(), kMass), P);
  const DiscretizedOperator U = exp_unitary(Q);
  DiscretizedOperator mQ = Q;
  mQ.matrix = -Q.matrix;
  const DiscretizedOperator V = exp_unitary(mQ);
  const linalg::Matrix Un = normalized(U);
  const linalg::Matrix I = linalg::Matrix::Identity(Un.rows(), Un.cols());
  EXPECT_LE(linalg::spectral_norm(Un * Un.adjoint() - I), 1e-10);
  EXPECT_LE(linalg::spectral_norm(normalized(U * V) - I), 1e-10);
}

TEST(ExpUnitary, RejectsNonSkewInput) {
  GridPtr g = flat_periodic(4);
  EXPECT_THROW(exp_unitary(pminus_flat_oracle(g, kMass)), NotSkewAdjoint);
}

TEST(RepresentativeProjector, ZeroFieldReproducesFreeProjector) {
  GridPtr g = flat_periodic(4);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  const DiscretizedOperator PA = p_lambda(g, *zero_field(), kMass);
  const RepresentativeResult r = representative_projector(P, q_commutator(PA, P), PA);
  EXPECT_LE((r.Pi.matrix - P.matrix).norm(), 1e-13);
}

TEST(RepresentativeProjector, ConjugationPreservesProjectorDefect) {
  GridPtr g = flat_periodic(5);
  const DiscretizedOperator P = pminus_flat_oracle(g, kMass);
  const DiscretizedOperator PA = p_lambda(g, *test_field(), kMass);
  const RepresentativeResult r = representative_projector(P, q_commutator(PA, P), PA);
  EXPECT_LE(std::abs(r.report.projector_defect - r.projector_defect_pminus), 1e-10);
  EXPECT_GT(r.report.hs_norm, 0.0);
}

TEST(RepresentativeExperiment, BlockConstructionDefects) {
  GridPtr g = flat_periodic(6);
  const BlockRepresentativeReport r = representative_experiment(g, *test_field(), kMass, true);
  EXPECT_LE(r.q_skew_defect, 1e-10);
  EXPECT_LE(r.q_diagonal_block_defect, 1e-10);
  EXPECT_LE(r.unitarity_defect, 1e-10);
  EXPECT_LE(r.pi_projector_defect, 1e-10 + r.oracle_projector_defect);
  EXPECT_GT(r.hs_pi_minus_pa, 0.0);
  EXPECT_GT(r.hs_pa_minus_pminus, r.hs_pi_minus_pa);
}

TEST(RepresentativeExperiment, ZeroFieldIsTrivial) {
  const BlockRepresentativeReport r = representative_experiment(flat_periodic(4), *zero_field(), kMass, true);
  EXPECT_EQ(r.hs_pa_minus_pminus, 0.0);
  EXPECT_LE(r.hs_pi_minus_pa, 1e-15);
}

TEST(Dichotomy, IdenticalFieldsGiveZeros) {
  auto A = test_field();
  const DichotomyTable t =
      tangential_dichotomy_experiment(*A, *A, std::make_shared<GaussianBumpSurface>(0.3, 1.0), 1.5, {4, 5, 6}, kMass);
  EXPECT_TRUE(t.identical);
  for (const auto& r : t.rows) EXPECT_EQ(r.hs_norm, 0.0);
  EXPECT_EQ(t.tangential_difference, 0.0);
}

TEST(LogLogSlope, RecoversPowerLawAndRejectsDegenerateData) {
  EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 0.75, 0.1875, 0.046875}), -2.0, 1e-12);
  EXPECT_THROW(loglog_slope({1, 1}, {2, 3}), FitError);
  EXPECT_THROW(loglog_slope({1, 2}, {0, 3}), FitError);
}

}  // namespace
}  // namespace qedcs
