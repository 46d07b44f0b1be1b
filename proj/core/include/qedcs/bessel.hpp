#pragma once

#include "qedcs/clifford.hpp"

namespace qedcs {

// K1(xi), f(xi) = K1(xi)/xi and the first two derivatives of f.
struct BesselEval {
  cd xi;
  cd value;  // K1(xi)
  cd f;
  cd df;
  cd d2f;
};

// Modified Bessel function K1 on C minus (-inf, 0], evaluated from
//   K1(xi) = (e^{-xi}/xi) int_0^inf e^{-t} sqrt(t^2 + 2 xi t) dt
// by adaptive Gauss-Kronrod quadrature.  Requires |xi| >= 1e-8.
cd k1(cd xi);

// f = K1/xi and
//   f'(xi) = -(e^{-xi}/xi^3) int_0^inf e^{-t} (t + xi) sqrt(t^2 + 2 xi t) dt,
//   f''    = f - 3 f'/xi   (from xi f'' + 3 f' - xi f = 0).
BesselEval f_and_derivatives(cd xi);

// Independent representation for real xi > 0:
//   K1(xi) = xi int_1^inf e^{-xi s} sqrt(s^2 - 1) ds.
double k1_real_alternative(double xi);

}  // namespace qedcs
