#pragma once

// Single home of every sign and normalization convention used by the library.
// docs/conventions.md lists each entry together with the test that pins it.

#include <array>

namespace qedcs::conventions {

// Metric signature (+,-,-,-): g = diag(kMetric).
inline constexpr std::array<double, 4> kMetric{1.0, -1.0, -1.0, -1.0};

// Gamma matrices in the standard (Dirac) representation:
//   gamma^0 = diag(1, 1, -1, -1),  gamma^k = [[0, sigma_k], [-sigma_k, 0]].
enum class GammaRepresentation { Dirac };
inline constexpr GammaRepresentation kGammaRepresentation = GammaRepresentation::Dirac;

// The negative mass shell is parametrized by p^0 = -E(p), and the invariant
// measure carries the signed weight m^2 / p^0 d^3p.  With this orientation
// D(w) = -(m^3 / 2 pi^2) K1(m r) / (m r).
inline constexpr double kMassShellEnergySign = -1.0;
inline constexpr double kDSign = -1.0;

// Spinor boost: S = cosh(chi/2) 1 + kBoostGeneratorSign * sinh(chi/2) gamma^0 gamma^a,
// fixed by requiring S gamma^mu S^{-1} = (Lambda^{-1})^mu_nu gamma^nu.
inline constexpr double kBoostGeneratorSign = 1.0;

// Discretized operators act as (K psi)_i = sum_j k(x_i, x_j) Gamma_j w_j psi_j.
enum class WeightConvention { RightGammaTimesWeight };
inline constexpr WeightConvention kWeightConvention = WeightConvention::RightGammaTimesWeight;

// Default regularization direction u (past-directed, unit time-like) and mass.
inline constexpr std::array<double, 4> kDefaultU{-1.0, 0.0, 0.0, 0.0};
inline constexpr double kDefaultMass = 1.0;

// Special-function evaluation.
inline constexpr double kBesselRelTol = 1e-10;
inline constexpr double kMinBesselArgument = 1e-8;

}  // namespace qedcs::conventions
