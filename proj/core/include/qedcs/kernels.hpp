#pragma once

#include "qedcs/clifford.hpp"
#include "qedcs/conventions.hpp"
#include "qedcs/field.hpp"
#include "qedcs/surface.hpp"

namespace qedcs {

// D(w) together with its first and second derivatives in w.
//   grad(mu)    = d_mu D       (lower index)
//   hess(nu,mu) = d_nu d_mu D  (symmetric)
struct DEval {
  CFourVector w;
  cd r;
  cd D;
  CFourVector grad;
  Eigen::Matrix4cd hess;
};

// D(w) = -(m^3 / 2 pi^2) K1(m r(w)) / (m r(w)).
DEval d_eval(const CFourVector& w, double m);

// p^-(w) = (-i gamma^mu d_mu D + m D) / (2m).
SpinorMatrix p_minus(const DEval& d, double m);
SpinorMatrix p_minus(const CFourVector& w, double m);
// d^w_mu p^-(w) = (-i gamma^nu d_mu d_nu D + m d_mu D) / (2m).
std::array<SpinorMatrix, 4> p_minus_derivatives(const DEval& d, double m);

inline FourVector default_u() {
  const auto& u = conventions::kDefaultU;
  return FourVector(u[0], u[1], u[2], u[3]);
}

struct KernelPoint {
  FourVector x = FourVector::Zero();
  FourVector y = FourVector::Zero();
  double epsilon = 0.0;
  FourVector u = default_u();

  // w = y - x + i eps u.
  CFourVector w() const { return complexify(y - x, epsilon, u); }
};

// lambda^A(x, y) = 1/2 (A_mu(x) + A_mu(y)) (x^mu - y^mu).
double lambda_A(const VectorPotential& A, const FourVector& x, const FourVector& y);
// Same phase from precomputed potentials.
double lambda_from_values(const FourVector& Ax, const FourVector& Ay, const FourVector& x_minus_y);

// Omega(x) + lambda - Omega(y).
double gauge_chain_lambda(double Omega_x, double lambda, double Omega_y);

// e^{-i lambda^A(x, y)} p^-(y - x + i eps u).
SpinorMatrix p_dressed(const VectorPotential& A, const KernelPoint& pt, double m);
// (e^{-i lambda^A(x, y)} - 1) p^-(y - x + i eps u).
SpinorMatrix delta_p_kernel(const VectorPotential& A, const KernelPoint& pt, double m);
// (1/8m) nslash(x) Eslash(x) r(w)^2 dslash D(w).
SpinorMatrix s_kernel(const CauchySurface& surface, const VectorPotential& A, const KernelPoint& pt, double m);

// r(w)^2 gamma^mu d_mu D(w).
SpinorMatrix r2_dslash_d(const DEval& d);
// d^w_nu [r^2 dslash D] from the analytic second derivatives.
std::array<SpinorMatrix, 4> r2_dslash_d_derivatives(const DEval& d);
// Closed form 2 w_nu dslash D - gamma_nu w^mu d_mu D + wslash w_nu m^2 D.
std::array<SpinorMatrix, 4> r2_dslash_d_identity(const DEval& d, double m);

}  // namespace qedcs
