#include "qedcs/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qedcs/bounds.hpp"
#include "qedcs/errors.hpp"
#include "qedcs/parallel.hpp"

namespace qedcs::identities {

namespace {

const cd I(0.0, 1.0);

double max_entry(const SpinorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<bounds::KernelSample> samples_for(const SuiteSpec& spec) {
  if (spec.count == 0) throw ConfigError("identities: sample count must be positive");
  bounds::SampleSpec s;
  s.count = spec.count;
  s.seed = spec.seed;
  s.mass = spec.mass;
  s.v_max = 0.9;
  s.z_min = 0.05;
  s.z_max = 5.0;
  return bounds::sample_kernel_arguments(s);
}

IdentityStats stats(const std::string& name, const std::vector<double>& r, double tol) {
  IdentityStats s;
  s.name = name;
  s.samples = r.size();
  s.max_residual = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  s.tolerance = tol;
  s.pass = !r.empty() && s.max_residual <= tol;
  return s;
}

}  // namespace

double klein_gordon_residual(const DEval& d, double m) {
  cd box = d.hess(0, 0);
  for (int k = 1; k < 4; ++k) box -= d.hess(k, k);
  return std::abs(box + m * m * d.D) / (m * m * std::abs(d.D));
}

double lorentz_symmetry_residual(const DEval& d) {
  const CFourVector wl = lower(d.w);
  double num = 0.0, den = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      num = std::max(num, std::abs(wl[nu] * d.grad[mu] - wl[mu] * d.grad[nu]));
      den = std::max(den, std::abs(wl[nu] * d.grad[mu]));
    }
  return num / den;
}

double r2_identity_residual(const DEval& d, double m) {
  const auto a = r2_dslash_d_derivatives(d);
  const auto b = r2_dslash_d_identity(d, m);
  double num = 0.0, den = 0.0;
  for (int nu = 0; nu < 4; ++nu) {
    num = std::max(num, (a[nu] - b[nu]).norm());
    den = std::max(den, a[nu].norm());
  }
  return num / den;
}

double dirac_residual(const DEval& d, double m) {
  const SpinorMatrix P = p_minus(d, m);
  const auto dP = p_minus_derivatives(d, m);
  // d^x = -d^w for the argument y - x + i eps u.
  SpinorMatrix r = -m * P;
  double scale = m * P.norm();
  for (int mu = 0; mu < 4; ++mu) {
    const SpinorMatrix t = gamma(mu) * dP[mu];
    r -= I * t;
    scale += t.norm();
  }
  return r.norm() / scale;
}

double lorentz_kernel_residual(const LorentzBoost& b, const CFourVector& w, double m) {
  const CFourVector wt = b.inverse().cast<cd>() * w;
  const SpinorMatrix lhs = b.S * p_minus(wt, m) * b.S.inverse();
  const SpinorMatrix rhs = p_minus(w, m);
  return (lhs - rhs).norm() / rhs.norm();
}

double gauge_kernel_residual(const SpinorMatrix& p, double Omega_x, double lambda, double Omega_y) {
  const SpinorMatrix lhs = std::exp(-I * Omega_x) * (std::exp(-I * lambda) * p) * std::exp(I * Omega_y);
  const SpinorMatrix rhs = std::exp(-I * gauge_chain_lambda(Omega_x, lambda, Omega_y)) * p;
  return max_entry(lhs - rhs) / max_entry(p);
}

std::vector<IdentityStats> analytic_identity_suite(const SuiteSpec& spec) {
  const auto samples = samples_for(spec);
  const std::size_t n = samples.size();
  std::vector<double> kg(n), ls(n), r2(n), dirac(n);
  parallel_for(n, [&](std::size_t k) {
    const auto& s = samples[k];
    const DEval d = d_eval(complexify(s.z, s.eps, s.u), spec.mass);
    kg[k] = klein_gordon_residual(d, spec.mass);
    ls[k] = lorentz_symmetry_residual(d);
    r2[k] = r2_identity_residual(d, spec.mass);
    dirac[k] = dirac_residual(d, spec.mass);
  });
  return {stats("klein_gordon", kg, 1e-9), stats("lorentz_symmetry", ls, 1e-10),
          stats("r2_dslash_d_identity", r2, 1e-8), stats("dirac_annihilation", dirac, 1e-9)};
}

std::vector<IdentityStats> covariance_suite(const SuiteSpec& spec) {
  const auto samples = samples_for(spec);
  const std::size_t n = samples.size();
  std::mt19937_64 rng(spec.seed + 7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> axis(1, 3);
  std::vector<LorentzBoost> boosts;
  std::vector<std::array<double, 3>> phases;
  for (std::size_t k = 0; k < n; ++k) {
    boosts.push_back(boost(spec.rapidity_max * U(rng), axis(rng)));
    phases.push_back({U(rng), U(rng), U(rng)});
  }
  std::vector<double> gauge(n), lorentz(n);
  parallel_for(n, [&](std::size_t k) {
    const auto& s = samples[k];
    const CFourVector w = complexify(s.z, s.eps, s.u);
    gauge[k] = gauge_kernel_residual(p_minus(w, spec.mass), phases[k][0], phases[k][1], phases[k][2]);
    lorentz[k] = lorentz_kernel_residual(boosts[k], w, spec.mass);
  });
  return {stats("gauge_kernel", gauge, 1e-15), stats("lorentz_kernel", lorentz, 1e-10)};
}

double operator_gauge_residual(GridPtr grid, const VectorPotential& A, const GaugeFunction& Omega, double eps,
                               double m) {
  const SurfaceGrid& g = *grid;
  const std::size_t n = g.size();
  std::vector<double> om(n);
  for (std::size_t i = 0; i < n; ++i) om[i] = Omega.value(g.points[i]);
  const FourVector u = default_u();
  auto p = [&](std::size_t i, std::size_t j) {
    return p_minus(complexify(g.displacement(i, j), eps, u), m);
  };
  const DiscretizedOperator base = assemble(
      [&](std::size_t i, std::size_t j) {
        return SpinorMatrix(std::exp(-I * lambda_A(A, g.points[i], g.points[j])) * p(i, j));
      },
      grid, DiagonalRule::Limit);
  const DiscretizedOperator chained = assemble(
      [&](std::size_t i, std::size_t j) {
        const double lam = gauge_chain_lambda(om[i], lambda_A(A, g.points[i], g.points[j]), om[j]);
        return SpinorMatrix(std::exp(-I * lam) * p(i, j));
      },
      grid, DiagonalRule::Limit);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SpinorMatrix lhs =
          std::exp(-I * om[i]) * base.matrix.block<4, 4>(4 * i, 4 * j) * std::exp(I * om[j]);
      worst = std::max(worst, max_entry(lhs - chained.matrix.block<4, 4>(4 * i, 4 * j)));
    }
  return worst;
}

}  // namespace qedcs::identities
