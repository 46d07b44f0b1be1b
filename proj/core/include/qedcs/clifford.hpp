#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qedcs {

using cd = std::complex<double>;

// Contravariant (upper-index) components x^0..x^3 in natural units.
using FourVector = Eigen::Vector4d;
using CFourVector = Eigen::Vector4cd;
using SpinorMatrix = Eigen::Matrix4cd;
using RealMatrix4 = Eigen::Matrix4d;

const RealMatrix4& metric();

// Index lowering with the metric: a_mu = g_{mu nu} a^nu.
FourVector lower(const FourVector& a);
CFourVector lower(const CFourVector& a);

double minkowski_dot(const FourVector& a, const FourVector& b);
cd minkowski_dot(const CFourVector& a, const CFourVector& b);

// w = z + i eps u.
CFourVector complexify(const FourVector& z, double eps, const FourVector& u);

// Principal square root of -w_mu w^mu.  Throws DomainError when -w.w lies in (-inf, 0].
cd radius(const CFourVector& w);

// gamma^mu with upper index, Dirac representation.
const SpinorMatrix& gamma(int mu);
// gamma_mu = g_{mu nu} gamma^nu.
SpinorMatrix gamma_lower(int mu);

// slash(v) = gamma^mu v_mu for a vector given by its upper components.
SpinorMatrix slash(const CFourVector& v);
SpinorMatrix slash(const FourVector& v);
// slash_covector(a) = gamma^mu a_mu for a covector given by its lower components.
SpinorMatrix slash_covector(const CFourVector& a);
SpinorMatrix slash_covector(const FourVector& a);

struct LorentzBoost {
  RealMatrix4 Lambda;  // x'^mu = Lambda^mu_nu x^nu
  SpinorMatrix S;
  double rapidity = 0.0;
  int axis = 1;

  RealMatrix4 inverse() const;
  FourVector apply(const FourVector& x) const { return Lambda * x; }
  CFourVector apply(const CFourVector& x) const { return Lambda.cast<cd>() * x; }
};

// Boost along a coordinate axis (1..3).  |rapidity| <= 5.
LorentzBoost boost(double rapidity, int axis);

// Largest entry modulus, used for relative residuals of 4x4 matrices.
double max_abs(const SpinorMatrix& m);

}  // namespace qedcs
