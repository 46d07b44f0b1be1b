#include "qedcs/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qedcs/errors.hpp"

namespace qedcs::oracle {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;

// sin(x)/x and j1(x)/x for complex x, with series near the origin.
cd sinc(cd x) {
  if (std::abs(x) < 1e-3) {
    const cd x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

cd j1_over_x(cd x) {
  if (std::abs(x) < 1e-2) {
    const cd x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) / x - std::cos(x)) / (x * x);
}

struct RadialSetup {
  cd w0;
  cd rho;
  double kmax;
  double panel;
};

RadialSetup setup(const CFourVector& w, const MassShellQuadrature& q) {
  FourVector im;
  for (int mu = 0; mu < 4; ++mu) im[mu] = w[mu].imag();
  if (!(im[0] < 0.0 && minkowski_dot(im, im) > 0.0)) {
    throw DomainError("mass-shell quadrature requires Im w to be past-directed time-like");
  }
  RadialSetup s;
  s.w0 = w[0];
  s.rho = std::sqrt(w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
  // |integrand| <= poly(k) exp(-(a - b) k) with a = -Im w0 and b = |Im rho|.
  const double a = -im[0];
  const double b = std::abs(s.rho.imag());
  const double rate = a - b;
  if (!(rate > 0.0)) throw DomainError("mass-shell quadrature: integrand does not decay");
  double K = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double bound = std::pow(K + q.mass, 4) * std::exp(-rate * K + a * q.mass);
    if (bound < 1e-16) break;
    K *= 1.25;
  }
  s.kmax = K;
  const double period = 2.0 * kPi / std::max(1e-3, std::abs(s.rho.real()) + std::abs(s.w0.real()));
  s.panel = std::min(period / q.panels_per_period, K / 16.0);
  return s;
}

template <class F>
cd radial(F&& f, const RadialSetup& s, const MassShellQuadrature& q) {
  cd total = 0.0;
  double err_total = 0.0, l1_total = 0.0;
  for (double a = 0.0; a < s.kmax; a += s.panel) {
    const double b = std::min(s.kmax, a + s.panel);
    double err = 0.0, l1 = 0.0;
    total += gauss_kronrod<double, 21>::integrate(f, a, b, 20, q.rel_tol, &err, &l1);
    err_total += err;
    l1_total += l1;
  }
  if (!(err_total <= 1e3 * q.rel_tol * std::max(std::abs(total), 1e-300) + 1e-300)) {
    std::ostringstream os;
    os << "mass-shell quadrature: error estimate " << err_total << " vs value " << std::abs(total);
    throw ConvergenceError(os.str());
  }
  (void)l1_total;
  return total;
}

}  // namespace

cd d_quadrature(const CFourVector& w, const MassShellQuadrature& q) {
  const RadialSetup s = setup(w, q);
  const double m = q.mass;
  auto f = [&](double k) {
    const double E = std::sqrt(k * k + m * m);
    return k * k / E * std::exp(cd(0.0, -E) * s.w0) * sinc(k * s.rho);
  };
  // D = (2 pi)^{-3} m^{-1} int e^{i p w} (m^2/p^0) d^3p with p^0 = -E.
  return -m / (2.0 * kPi * kPi) * radial(f, s, q);
}

SpinorMatrix pminus_quadrature(const CFourVector& w, const MassShellQuadrature& q) {
  const RadialSetup s = setup(w, q);
  const double m = q.mass;
  auto phase = [&](double E) { return std::exp(cd(0.0, -E) * s.w0); };
  auto fs = [&](double k) {
    const double E = std::sqrt(k * k + m * m);
    return k * k / E * phase(E) * sinc(k * s.rho);
  };
  auto fe = [&](double k) {
    const double E = std::sqrt(k * k + m * m);
    return k * k * phase(E) * sinc(k * s.rho);
  };
  auto fj = [&](double k) {
    const double E = std::sqrt(k * k + m * m);
    return k * k * k * k / E * phase(E) * j1_over_x(k * s.rho);
  };
  const cd Is = radial(fs, s, q);
  const cd Ie = radial(fe, s, q);
  const cd Ij = radial(fj, s, q);
  SpinorMatrix gw = gamma(1) * w[1] + gamma(2) * w[2] + gamma(3) * w[3];
  const cd i(0.0, 1.0);
  SpinorMatrix r = m * Is * SpinorMatrix::Identity() - Ie * gamma(0) + i * Ij * gw;
  return -r / (4.0 * kPi * kPi);
}

}  // namespace qedcs::oracle
