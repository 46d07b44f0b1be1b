#include "qedcs/flow.hpp"

#include <cmath>

#include "qedcs/errors.hpp"
#include "qedcs/operators.hpp"
#include "qedcs/parallel.hpp"

namespace qedcs {

namespace {

const cd I(0.0, 1.0);

double frob(const SpinorMatrix& m) { return m.norm(); }

// Pieces of the kernels shared by the flow derivative and the s-derivative.
struct KernelJet {
  DEval d;
  SpinorMatrix P;                    // p^-(w)
  std::array<SpinorMatrix, 4> dP;    // d^w_mu p^-
  SpinorMatrix W;                    // r^2 dslash D
  std::array<SpinorMatrix, 4> dW;    // d^w_mu W
};

KernelJet kernel_jet(const FlowPoint& x, const FlowPoint& y, double eps, double m, const FourVector& u) {
  KernelJet j;
  j.d = d_eval(complexify(y.x - x.x, eps, u), m);
  j.P = p_minus(j.d, m);
  j.dP = p_minus_derivatives(j.d, m);
  j.W = r2_dslash_d(j.d);
  j.dW = r2_dslash_d_derivatives(j.d);
  return j;
}

// N = nslash Eslash and its derivatives d_mu N at x.
SpinorMatrix n_e(const FlowPoint& p) { return slash(p.n) * slash_covector(p.E); }

std::array<SpinorMatrix, 4> n_e_derivatives(const FlowPoint& p) {
  std::array<SpinorMatrix, 4> r;
  const SpinorMatrix ns = slash(p.n), es = slash_covector(p.E);
  for (int mu = 0; mu < 4; ++mu) {
    const FourVector dn = p.dn.row(mu).transpose();
    const FourVector dE = p.dE.row(mu).transpose();
    r[mu] = slash(dn) * es + ns * slash_covector(dE);
  }
  return r;
}

// D_t^A of a kernel given its x- and y-derivatives (lower index).
SpinorMatrix flow_combination(const FlowPoint& x, const FlowPoint& y, const SpinorMatrix& k,
                              const std::array<SpinorMatrix, 4>& dxk, const std::array<SpinorMatrix, 4>& dyk,
                              double m) {
  SpinorMatrix left = -slash_covector(x.A) * k - m * k;
  SpinorMatrix right = -k * slash_covector(y.A) - m * k;
  for (int mu = 0; mu < 4; ++mu) {
    left += I * gamma(mu) * dxk[mu];
    right += -I * dyk[mu] * gamma(mu);
  }
  return x.v * x.nslash() * left - right * (y.v * y.nslash());
}

struct FlowParts {
  SpinorMatrix dAp, dAs, s_dot;
  SpinorMatrix leading;
};

FlowParts flow_parts(const FlowPoint& x, const FlowPoint& y, double eps, double m, const FourVector& u) {
  const KernelJet j = kernel_jet(x, y, eps, m, u);
  FlowParts r;
  const FourVector xmy = x.x - y.x;
  const FourVector z = y.x - x.x;

  // p^{A, eps u} = e^{-i lambda} P(w), with w = y - x + i eps u.
  const double lam = lambda_from_values(x.A, y.A, xmy);
  const cd ph = std::exp(cd(0.0, -lam));
  const FourVector Asum = x.A + y.A;
  const FourVector dlx = 0.5 * (x.dA * xmy + Asum);  // d^x_mu lambda
  const FourVector dly = 0.5 * (y.dA * xmy - Asum);  // d^y_mu lambda
  const SpinorMatrix k = ph * j.P;
  std::array<SpinorMatrix, 4> dxk, dyk;
  for (int mu = 0; mu < 4; ++mu) {
    dxk[mu] = ph * (-I * dlx[mu] * j.P - j.dP[mu]);
    dyk[mu] = ph * (-I * dly[mu] * j.P + j.dP[mu]);
  }
  r.dAp = flow_combination(x, y, k, dxk, dyk, m);

  // s = (1/8m) N(x) W(w).
  if (x.field) {
    const SpinorMatrix N = n_e(x);
    const auto dN = n_e_derivatives(x);
    const SpinorMatrix s = N * j.W / (8.0 * m);
    std::array<SpinorMatrix, 4> dxs, dys;
    for (int mu = 0; mu < 4; ++mu) {
      dxs[mu] = (dN[mu] * j.W - N * j.dW[mu]) / (8.0 * m);
      dys[mu] = N * j.dW[mu] / (8.0 * m);
    }
    r.dAs = flow_combination(x, y, s, dxs, dys, m);
    // ds/ds: only n moves; dE_mu/ds = F_{mu nu} dn^nu/ds with F = dA - dA^T.
    const FourVector dE = (x.dA - x.dA.transpose()) * x.dn_ds;
    r.s_dot = (slash(x.dn_ds) * slash_covector(x.E) + slash(x.n) * slash_covector(dE)) * j.W / (8.0 * m);
  } else {
    r.dAs.setZero();
    r.s_dot.setZero();
  }

  // Leading term -(i/2m) v(x) z^mu E_mu(x) dslash D(w).
  r.leading = -I / (2.0 * m) * x.v * z.dot(x.E) * slash_covector(j.d.grad);
  return r;
}

}  // namespace

FlowPoint flow_point(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& xs) {
  const SurfacePtr slice = family.slice(s);
  FlowPoint p;
  p.x = embed(*slice, xs);
  const FamilyVelocity fv = family_velocity(family, xs, s);
  p.n = fv.n;
  p.v = fv.v;
  p.dn_ds = fv.dn_ds;
  p.dn.setZero();
  p.dn.bottomRows<3>() = normal_spatial_derivatives(*slice, xs);
  p.field = !A.vanishes_at(p.x);
  if (p.field) {
    p.A = A.value(p.x);
    p.dA = A.jacobian(p.x);
    p.E = electric_field(A, p.x, p.n);
    p.dE = electric_field_derivatives(A, p.x, p.n, p.dn);
  } else {
    p.A.setZero();
    p.dA.setZero();
    p.E.setZero();
    p.dE.setZero();
  }
  return p;
}

FlowEval flow_derivative_kernel(const FlowPoint& x, const FlowPoint& y, double eps, double m, const FourVector& u) {
  const FlowParts parts = flow_parts(x, y, eps, m, u);
  FlowEval e;
  e.dAp = parts.dAp;
  e.dAs = parts.dAs;
  e.dApPlusS = parts.dAp + parts.dAs;
  e.leading = parts.leading;
  e.s_dot = parts.s_dot;
  e.z_norm = (y.x - x.x).tail<3>().norm();
  e.epsilon = eps;
  return e;
}

FlowEval flow_derivative_kernel(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& x,
                                const Vec3& y, double eps, double m) {
  return flow_derivative_kernel(flow_point(family, s, A, x), flow_point(family, s, A, y), eps, m);
}

SpinorMatrix s_dot_kernel(const FlowPoint& x, const FlowPoint& y, double eps, double m, const FourVector& u) {
  if (!x.field) return SpinorMatrix::Zero();
  const DEval d = d_eval(complexify(y.x - x.x, eps, u), m);
  const FourVector dE = (x.dA - x.dA.transpose()) * x.dn_ds;
  return (slash(x.dn_ds) * slash_covector(x.E) + slash(x.n) * slash_covector(dE)) * r2_dslash_d(d) / (8.0 * m);
}

SpinorMatrix s_dot_kernel(const SurfaceFamily& family, double s, const VectorPotential& A, const Vec3& x,
                          const Vec3& y, double eps, double m) {
  return s_dot_kernel(flow_point(family, s, A, x), flow_point(family, s, A, y), eps, m);
}

SpinorMatrix remainder_kernel(const FlowPoint& x, const FlowPoint& y, double m) {
  const FlowParts parts = flow_parts(x, y, 0.0, m, default_u());
  return -I * (parts.dAp + parts.dAs) + parts.s_dot;
}

std::vector<Vec3> sample_directions() {
  std::vector<Vec3> d;
  for (int k = 0; k < 3; ++k)
    for (int sgn : {1, -1}) {
      Vec3 e = Vec3::Zero();
      e[k] = sgn;
      d.push_back(e);
    }
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) d.push_back(Vec3(a, b, c).normalized());
  return d;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw ConfigError("log_spaced: need count >= 2 and 0 < lo < hi");
  std::vector<double> r(count);
  for (int k = 0; k < count; ++k) r[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return r;
}

ScalingFit residual_scaling(const SurfaceFamily& family, double s, const VectorPotential& A, double eps,
                            const std::vector<double>& z_samples, double m, const Vec3& center) {
  if (z_samples.size() < 20) throw FitError("residual_scaling: at least 20 |z| samples are required");
  ScalingFit fit;
  const FlowPoint x = flow_point(family, s, A, center);
  if (!x.field) {
    fit.status = FitStatus::ZeroField;
    return fit;
  }
  const std::vector<Vec3> dirs = sample_directions();
  std::vector<double> zs, a, b;
  for (double zn : z_samples) {
    ScalingRow row;
    row.z_norm = zn;
    for (const Vec3& d : dirs) {
      const FlowPoint y = flow_point(family, s, A, center + zn * d);
      const FlowEval e = flow_derivative_kernel(x, y, eps, m);
      row.without_s += frob(e.dAp);
      row.with_s += frob(e.dApPlusS);
      row.leading_residual += frob(e.dAp - e.leading) * e.z_norm;
      fit.max_leading_residual = std::max(fit.max_leading_residual, frob(e.dAp - e.leading) * e.z_norm);
    }
    row.without_s /= static_cast<double>(dirs.size());
    row.with_s /= static_cast<double>(dirs.size());
    row.leading_residual /= static_cast<double>(dirs.size());
    zs.push_back(zn);
    a.push_back(row.without_s);
    b.push_back(row.with_s);
    fit.rows.push_back(row);
  }
  fit.slope_without_s = loglog_slope(zs, a);
  fit.slope_with_s = loglog_slope(zs, b);
  fit.slope_gap = fit.slope_with_s - fit.slope_without_s;
  return fit;
}

EpsilonFit epsilon_scaling(const SurfaceFamily& family, double s, const VectorPotential& A, double z_norm,
                           const std::vector<double>& eps, double m, const Vec3& center) {
  EpsilonFit fit;
  const FlowPoint x = flow_point(family, s, A, center);
  if (!x.field) throw FitError("epsilon_scaling: the field vanishes at the base point");
  const std::vector<Vec3> dirs = sample_directions();
  std::vector<FlowPoint> ys;
  std::vector<SpinorMatrix> limit;
  for (const Vec3& d : dirs) {
    ys.push_back(flow_point(family, s, A, center + z_norm * d));
    limit.push_back(flow_derivative_kernel(x, ys.back(), 0.0, m).dApPlusS);
  }
  for (double e : eps) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dirs.size(); ++k) acc += frob(flow_derivative_kernel(x, ys[k], e, m).dApPlusS - limit[k]);
    fit.eps.push_back(e);
    fit.distance.push_back(acc / static_cast<double>(dirs.size()));
  }
  fit.exponent = loglog_slope(fit.eps, fit.distance);
  return fit;
}

RemainderReport remainder_hs_estimate(const SurfaceFamily& family, const std::vector<double>& s_values,
                                      const VectorPotential& A, double L, int N, double m) {
  RemainderReport rep;
  rep.N = N;
  for (double s : s_values) {
    GridPtr grid = make_grid(family.slice(s), L, N, QuadratureRule::Midpoint, false, A.support(), 0.0);
    const SurfaceGrid& g = *grid;
    const std::size_t n = g.size();
    std::vector<FlowPoint> pts(n);
    std::vector<SpinorMatrix> Lw(n), Rw(n);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = flow_point(family, s, A, g.nodes[i]);
      Lw[i] = gamma(0) * g.Gamma[i];
      Rw[i] = g.Gamma[i] * gamma(0);
    }
    std::vector<double> partial(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        // The kernel vanishes when neither point meets the field support.
        if (i == j || (!pts[i].field && !pts[j].field)) continue;
        const SpinorMatrix k = remainder_kernel(pts[i], pts[j], m);
        acc += g.weights[i] * g.weights[j] * (k.adjoint() * Lw[i] * k * Rw[j]).trace().real();
      }
      partial[i] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    const double hs = std::sqrt(std::max(total, 0.0));
    rep.slices.push_back({s, hs});
    rep.sup = std::max(rep.sup, hs);
  }
  return rep;
}

}  // namespace qedcs
