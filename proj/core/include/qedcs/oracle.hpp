#pragma once

#include "qedcs/clifford.hpp"

namespace qedcs::oracle {

// Brute-force momentum-space evaluation of the kernels as integrals over the
// negative mass shell p^0 = -E(p).  The angular integration is done in closed
// form (spherical Bessel functions of the complex radius sqrt(w.w) of the
// spatial part), the radial integral by adaptive Gauss-Kronrod panels.
struct MassShellQuadrature {
  double mass = 1.0;
  // Panels per oscillation period of the radial integrand; doubling it is the
  // self-convergence check.
  int panels_per_period = 2;
  double rel_tol = 1e-12;
};

// Requires Im w strictly past-directed time-like.  Throws DomainError otherwise
// and ConvergenceError when the panels miss their tolerance.
cd d_quadrature(const CFourVector& w, const MassShellQuadrature& q);
SpinorMatrix pminus_quadrature(const CFourVector& w, const MassShellQuadrature& q);

}  // namespace qedcs::oracle
