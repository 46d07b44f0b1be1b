#include "qedcs/kernels.hpp"

#include <cmath>
#include <numbers>

#include "qedcs/bessel.hpp"
#include "qedcs/errors.hpp"

namespace qedcs {

DEval d_eval(const CFourVector& w, double m) {
  if (!(m > 0.0)) throw DomainError("d_eval: mass must be positive");
  DEval d;
  d.w = w;
  d.r = radius(w);
  const BesselEval b = f_and_derivatives(m * d.r);
  const double c = -conventions::kDSign * m * m * m / (2.0 * std::numbers::pi * std::numbers::pi);
  // With c = m^3 / 2 pi^2:  D = -c f,  d_mu D = c m f' w_mu / r,
  // d_nu d_mu D = c m [g f'/r + w_mu w_nu f'/r^3 - m w_mu w_nu f''/r^2].
  d.D = -c * b.f;
  const CFourVector wl = lower(w);
  const cd r = d.r;
  d.grad = (c * m * b.df / r) * wl;
  const Eigen::Matrix4cd ww = wl * wl.transpose();
  d.hess = c * m * (metric().cast<cd>() * (b.df / r) + ww * (b.df / (r * r * r) - m * b.d2f / (r * r)));
  return d;
}

SpinorMatrix p_minus(const DEval& d, double m) {
  const cd i(0.0, 1.0);
  return (-i * slash_covector(d.grad) + m * d.D * SpinorMatrix::Identity()) / (2.0 * m);
}

SpinorMatrix p_minus(const CFourVector& w, double m) { return p_minus(d_eval(w, m), m); }

std::array<SpinorMatrix, 4> p_minus_derivatives(const DEval& d, double m) {
  const cd i(0.0, 1.0);
  std::array<SpinorMatrix, 4> r;
  for (int mu = 0; mu < 4; ++mu) {
    const CFourVector row = d.hess.row(mu).transpose();
    r[mu] = (-i * slash_covector(row) + m * d.grad[mu] * SpinorMatrix::Identity()) / (2.0 * m);
  }
  return r;
}

double lambda_from_values(const FourVector& Ax, const FourVector& Ay, const FourVector& x_minus_y) {
  return 0.5 * (Ax + Ay).dot(x_minus_y);
}

double lambda_A(const VectorPotential& A, const FourVector& x, const FourVector& y) {
  return lambda_from_values(A.value(x), A.value(y), x - y);
}

double gauge_chain_lambda(double Omega_x, double lambda, double Omega_y) {
  return Omega_x + lambda - Omega_y;
}

SpinorMatrix p_dressed(const VectorPotential& A, const KernelPoint& pt, double m) {
  const double lam = lambda_A(A, pt.x, pt.y);
  return std::exp(cd(0.0, -lam)) * p_minus(pt.w(), m);
}

SpinorMatrix delta_p_kernel(const VectorPotential& A, const KernelPoint& pt, double m) {
  const double lam = lambda_A(A, pt.x, pt.y);
  if (lam == 0.0) return SpinorMatrix::Zero();
  return (std::exp(cd(0.0, -lam)) - 1.0) * p_minus(pt.w(), m);
}

SpinorMatrix r2_dslash_d(const DEval& d) {
  const cd r2 = -minkowski_dot(d.w, d.w);
  return r2 * slash_covector(d.grad);
}

std::array<SpinorMatrix, 4> r2_dslash_d_derivatives(const DEval& d) {
  const cd r2 = -minkowski_dot(d.w, d.w);
  const CFourVector wl = lower(d.w);
  const SpinorMatrix ds = slash_covector(d.grad);
  std::array<SpinorMatrix, 4> r;
  for (int nu = 0; nu < 4; ++nu) {
    const CFourVector row = d.hess.row(nu).transpose();
    r[nu] = -2.0 * wl[nu] * ds + r2 * slash_covector(row);
  }
  return r;
}

std::array<SpinorMatrix, 4> r2_dslash_d_identity(const DEval& d, double m) {
  const CFourVector wl = lower(d.w);
  const SpinorMatrix ds = slash_covector(d.grad);
  const cd wd = (d.w.array() * d.grad.array()).sum();  // w^mu d_mu D
  const SpinorMatrix ws = slash(d.w);
  std::array<SpinorMatrix, 4> r;
  for (int nu = 0; nu < 4; ++nu) {
    r[nu] = 2.0 * wl[nu] * ds - gamma_lower(nu) * wd + ws * (wl[nu] * m * m * d.D);
  }
  return r;
}

SpinorMatrix s_kernel(const CauchySurface& surface, const VectorPotential& A, const KernelPoint& pt, double m) {
  if (A.vanishes_at(pt.x)) return SpinorMatrix::Zero();
  const Vec3 xs(pt.x[1], pt.x[2], pt.x[3]);
  const FourVector n = normal(surface, xs);
  const FourVector E = electric_field(A, pt.x, n);
  const SpinorMatrix NE = slash(n) * slash_covector(E);
  return NE * r2_dslash_d(d_eval(pt.w(), m)) / (8.0 * m);
}

}  // namespace qedcs
