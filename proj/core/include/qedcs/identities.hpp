#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qedcs/field.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/operators.hpp"

namespace qedcs::identities {

// Relative residuals of the analytic kernel identities at one argument.
//   |g^{mu nu} d_mu d_nu D + m^2 D| / (m^2 |D|)
double klein_gordon_residual(const DEval& d, double m);
//   max |w_nu d_mu D - w_mu d_nu D| / max |w_nu d_mu D|
double lorentz_symmetry_residual(const DEval& d);
//   max_nu ||d_nu [r^2 dslash D] - (2 w_nu dslash D - gamma_nu w.dD + wslash w_nu m^2 D)|| / max_nu ||d_nu [r^2 dslash D]||
double r2_identity_residual(const DEval& d, double m);
//   ||(i dslash_x - m) p^-(y - x + i eps u)|| / (sum_mu ||gamma^mu d_mu p^-|| + m ||p^-||)
double dirac_residual(const DEval& d, double m);
//   ||S p^-(Lambda^{-1} w) S^{-1} - p^-(w)|| / ||p^-(w)||
double lorentz_kernel_residual(const LorentzBoost& b, const CFourVector& w, double m);
//   max entry of e^{-i Omega_x} e^{-i lambda} p e^{i Omega_y} - e^{-i lambda'} p with
//   lambda' = Omega_x + lambda - Omega_y, relative to the largest entry of p
double gauge_kernel_residual(const SpinorMatrix& p, double Omega_x, double lambda, double Omega_y);

struct IdentityStats {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  double mass = 1.0;
  double rapidity_max = 1.0;
};

// Klein-Gordon, Lorentz symmetry, the r^2 dslash D derivative identity and
// Dirac annihilation at `count` random admissible arguments.
std::vector<IdentityStats> analytic_identity_suite(const SuiteSpec& spec);

// Gauge and boost covariance of the kernel at `count` random arguments
// (random boosts with |rapidity| <= rapidity_max along random axes).
std::vector<IdentityStats> covariance_suite(const SuiteSpec& spec);

// Conjugation of the assembled regularized P^lambda (lambda = lambda^A) by the
// diagonal phases e^{-i Omega(x_i)} against the assembly with the chained
// phases lambda'(x, y) = Omega(x) + lambda(x, y) - Omega(y): largest entry
// difference.
double operator_gauge_residual(GridPtr grid, const VectorPotential& A, const GaugeFunction& Omega, double eps,
                               double m);

}  // namespace qedcs::identities
