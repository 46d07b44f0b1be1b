#pragma once

#include <string>
#include <vector>

#include "qedcs/field.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/surface.hpp"

namespace qedcs {

// Geometry and field data at a point of a slice Sigma_s, with the normal field
// extended to R^4 independently of x^0.
struct FlowPoint {
  FourVector x;
  FourVector A;            // A_mu
  RealMatrix4 dA;          // d_mu A_nu
  FourVector n;            // unit normal n^mu
  RealMatrix4 dn;          // row mu: d_mu n^kappa (row 0 vanishes)
  FourVector E;            // E_mu = F_{mu nu} n^nu
  RealMatrix4 dE;          // row mu: d_mu E_nu
  double v = 0.0;          // normal velocity of the family
  FourVector dn_ds;        // d n / ds at fixed x
  bool field = false;      // A or its derivatives are non-zero here

  SpinorMatrix nslash() const { return slash(n); }
};

FlowPoint flow_point(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& x);

struct FlowEval {
  SpinorMatrix dAp;        // D_t^A p^{A, eps u}
  SpinorMatrix leading;    // -(i/2m) v(x) z^mu E_mu(x) dslash D(w)
  SpinorMatrix dAs;        // D_t^A s^{A, eps u}
  SpinorMatrix dApPlusS;   // D_t^A (p + s)
  SpinorMatrix s_dot;      // d s / ds at fixed x, y
  double z_norm = 0.0;     // |z| of the spatial part of z = y - x
  double epsilon = 0.0;
};

// D_t^A k = v(x) nslash(x) D^A_x k - (k <-D^A_y) v(y) nslash(y) for k = p^{A, eps u}
// and k = s^{A, eps u}, with D^A_x = i gamma^mu d^x_mu - Aslash(x) - m and
// k <-D^A_y = -i d^y_mu k gamma^mu - k Aslash(y) - m k.  All derivatives are analytic.
FlowEval flow_derivative_kernel(const FlowPoint& x, const FlowPoint& y, double eps, double m,
                                const FourVector& u = default_u());
FlowEval flow_derivative_kernel(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& x,
                                const Vec3& y, double eps, double m);

// d/ds of s_{Sigma_s}^{A, eps u}(x, y) at fixed x, y: only the normal moves, and
// dE_mu/ds = F_{mu nu} dn^nu/ds.
SpinorMatrix s_dot_kernel(const FlowPoint& x, const FlowPoint& y, double eps, double m,
                          const FourVector& u = default_u());
SpinorMatrix s_dot_kernel(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& x,
                          const Vec3& y, double eps, double m);

// Kernel of R(s) = -i D_t^A (p + s)|_{eps = 0} + ds/ds|_{eps = 0} for x != y.
SpinorMatrix remainder_kernel(const FlowPoint& x, const FlowPoint& y, double m);

enum class FitStatus { Ok, ZeroField };

struct ScalingRow {
  double z_norm = 0.0;
  double without_s = 0.0;    // direction-averaged Frobenius norm of D_t^A p
  double with_s = 0.0;       // ... of D_t^A (p + s)
  double leading_residual = 0.0;  // ... of D_t^A p - leading, times |z|
};

struct ScalingFit {
  FitStatus status = FitStatus::Ok;
  double slope_without_s = 0.0;
  double slope_with_s = 0.0;
  double slope_gap = 0.0;
  double max_leading_residual = 0.0;  // sup over samples of |z| ||D_t^A p - leading||
  std::vector<ScalingRow> rows;
};

// Directions used for averaging over the relative position of y.
std::vector<Vec3> sample_directions();

// `count` log-spaced values in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

// Log-log slopes of ||D_t^A p|| and ||D_t^A (p + s)|| against |z|, with x at
// `center` on slice s and y = x + |z| d over sample_directions().  Requires at
// least 20 samples.  Returns status ZeroField (no fit) when A vanishes at x.
ScalingFit residual_scaling(const SurfaceFamily& family, double s, const VectorPotential& A, double eps,
                            const std::vector<double>& z_samples, double m, const Vec3& center = Vec3::Zero());

struct EpsilonFit {
  std::vector<double> eps;
  std::vector<double> distance;  // ||D_t^A(p + s)(eps) - D_t^A(p + s)(0)||, direction averaged
  double exponent = 0.0;
};

// Scaling in eps of the distance of D_t^A(p + s) to its eps = 0 limit at fixed |z|.
EpsilonFit epsilon_scaling(const SurfaceFamily& family, double s, const VectorPotential& A, double z_norm,
                           const std::vector<double>& eps, double m, const Vec3& center = Vec3::Zero());

struct RemainderSlice {
  double s = 0.0;
  double hs_norm = 0.0;
};

struct RemainderReport {
  int N = 0;
  std::vector<RemainderSlice> slices;
  double sup = 0.0;
};

// HS norms of R(s) on each slice, assembled on an N^3 midpoint grid of
// half-width L with the diagonal excluded and streamed over pairs with a
// point in the field support.
RemainderReport remainder_hs_estimate(const SurfaceFamily& family, const std::vector<double>& s_values,
                                      const VectorPotential& A, double L, int N, double m);

}  // namespace qedcs
