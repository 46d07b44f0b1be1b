#include "qedcs/bessel.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qedcs/conventions.hpp"
#include "qedcs/errors.hpp"

namespace qedcs {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr unsigned kMaxDepth = 18;

void check_domain(cd xi) {
  if (xi.imag() == 0.0 && xi.real() <= 0.0) {
    std::ostringstream os;
    os << "Bessel K1: argument " << xi << " lies on the branch cut (-inf, 0]";
    throw DomainError(os.str());
  }
  if (std::abs(xi) < conventions::kMinBesselArgument) {
    std::ostringstream os;
    os << "Bessel K1: |xi| = " << std::abs(xi) << " is below the supported minimum";
    throw DomainError(os.str());
  }
}

// Upper limit T of the t-integration so that the dropped tail
// int_T^inf e^{-t} (t + |xi|)^2 dt is below 1e-18 in absolute terms.
double cutoff(double absxi) {
  double T = 40.0;
  for (;;) {
    const double a = T + absxi;
    const double tail = std::exp(-T) * (a * a + 2.0 * a + 2.0);
    if (tail < 1e-18) return T;
    T += 4.0;
  }
}

// Panel boundaries in the substituted variable s = sqrt(t).
std::vector<double> panels(cd xi, double smax) {
  std::vector<double> b{0.0};
  if (xi.real() < 0.0) {
    // sqrt(s^2 + 2 xi) comes close to its branch point at s^2 = -2 Re xi.
    const double sb = std::sqrt(-2.0 * xi.real());
    if (sb < smax) b.push_back(sb);
  } else {
    const double sc = std::sqrt(std::abs(xi));
    if (sc < smax && sc > 1e-3) b.push_back(sc);
  }
  b.push_back(smax);
  return b;
}

template <class T, class F>
T integrate_panels(F&& f, const std::vector<double>& b, const char* what, cd xi) {
  T total = T(0);
  double err_total = 0.0;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    double err = 0.0;
    const T piece = gauss_kronrod<double, 15>::integrate(f, b[k], b[k + 1], kMaxDepth,
                                                         0.1 * conventions::kBesselRelTol, &err);
    total += piece;
    err_total += err;
  }
  if (!(err_total <= conventions::kBesselRelTol * std::abs(total))) {
    std::ostringstream os;
    os << what << ": quadrature error " << err_total << " exceeds tolerance at xi = " << xi;
    throw ConvergenceError(os.str());
  }
  return total;
}

// I0 = int e^{-t} sqrt(t^2 + 2 xi t) dt and I1 = int e^{-t} (t + xi) sqrt(t^2 + 2 xi t) dt.
void integrals(cd xi, cd& I0, cd& I1) {
  const double smax = std::sqrt(cutoff(std::abs(xi)));
  const auto b = panels(xi, smax);
  if (xi.imag() == 0.0) {
    const double x = xi.real();
    auto g0 = [x](double s) {
      const double t = s * s;
      return 2.0 * t * std::exp(-t) * std::sqrt(t + 2.0 * x);
    };
    auto g1 = [x](double s) {
      const double t = s * s;
      return 2.0 * t * std::exp(-t) * (t + x) * std::sqrt(t + 2.0 * x);
    };
    I0 = integrate_panels<double>(g0, b, "K1", xi);
    I1 = integrate_panels<double>(g1, b, "K1 derivative", xi);
    return;
  }
  // t = s^2, dt = 2 s ds, sqrt(t^2 + 2 xi t) = s sqrt(s^2 + 2 xi) on the principal branch.
  auto g0 = [xi](double s) {
    const double t = s * s;
    return cd(2.0 * t * std::exp(-t)) * std::sqrt(t + 2.0 * xi);
  };
  auto g1 = [xi](double s) {
    const double t = s * s;
    return cd(2.0 * t * std::exp(-t)) * (t + xi) * std::sqrt(t + 2.0 * xi);
  };
  I0 = integrate_panels<cd>(g0, b, "K1", xi);
  I1 = integrate_panels<cd>(g1, b, "K1 derivative", xi);
}

}  // namespace

cd k1(cd xi) {
  check_domain(xi);
  const double smax = std::sqrt(cutoff(std::abs(xi)));
  const auto b = panels(xi, smax);
  cd I0;
  if (xi.imag() == 0.0) {
    const double x = xi.real();
    auto g0 = [x](double s) {
      const double t = s * s;
      return 2.0 * t * std::exp(-t) * std::sqrt(t + 2.0 * x);
    };
    I0 = integrate_panels<double>(g0, b, "K1", xi);
  } else {
    auto g0 = [xi](double s) {
      const double t = s * s;
      return cd(2.0 * t * std::exp(-t)) * std::sqrt(t + 2.0 * xi);
    };
    I0 = integrate_panels<cd>(g0, b, "K1", xi);
  }
  return std::exp(-xi) / xi * I0;
}

BesselEval f_and_derivatives(cd xi) {
  check_domain(xi);
  cd I0, I1;
  integrals(xi, I0, I1);
  const cd e = std::exp(-xi);
  BesselEval r;
  r.xi = xi;
  r.value = e / xi * I0;
  r.f = r.value / xi;
  r.df = -e / (xi * xi * xi) * I1;
  r.d2f = r.f - 3.0 * r.df / xi;
  return r;
}

double k1_real_alternative(double xi) {
  if (!(xi > 0.0)) throw DomainError("k1_real_alternative: requires xi > 0");
  // s = 1 + q^2 removes the square-root singularity at s = 1.
  const double qmax = std::sqrt(cutoff(xi) / xi + 1.0);
  auto g = [xi](double q) {
    const double s = 1.0 + q * q;
    return 2.0 * q * q * std::exp(-xi * (s - 1.0)) * std::sqrt(s + 1.0);
  };
  double err = 0.0;
  const double I = gauss_kronrod<double, 15>::integrate(g, 0.0, qmax, kMaxDepth, 1e-12, &err);
  return xi * std::exp(-xi) * I;
}

}  // namespace qedcs
