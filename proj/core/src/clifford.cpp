#include "qedcs/clifford.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qedcs/conventions.hpp"
#include "qedcs/errors.hpp"

namespace qedcs {

namespace {

std::array<SpinorMatrix, 4> make_gammas() {
  const cd i(0.0, 1.0);
  Eigen::Matrix2cd s1, s2, s3, id2;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  id2.setIdentity();
  std::array<SpinorMatrix, 4> g;
  g[0].setZero();
  g[0].topLeftCorner<2, 2>() = id2;
  g[0].bottomRightCorner<2, 2>() = -id2;
  const std::array<Eigen::Matrix2cd, 3> sig{s1, s2, s3};
  for (int k = 0; k < 3; ++k) {
    g[k + 1].setZero();
    g[k + 1].topRightCorner<2, 2>() = sig[k];
    g[k + 1].bottomLeftCorner<2, 2>() = -sig[k];
  }
  return g;
}

const std::array<SpinorMatrix, 4>& gammas() {
  static const std::array<SpinorMatrix, 4> g = make_gammas();
  return g;
}

}  // namespace

const RealMatrix4& metric() {
  static const RealMatrix4 g = [] {
    RealMatrix4 m = RealMatrix4::Zero();
    for (int mu = 0; mu < 4; ++mu) m(mu, mu) = conventions::kMetric[mu];
    return m;
  }();
  return g;
}

FourVector lower(const FourVector& a) {
  FourVector r;
  for (int mu = 0; mu < 4; ++mu) r[mu] = conventions::kMetric[mu] * a[mu];
  return r;
}

CFourVector lower(const CFourVector& a) {
  CFourVector r;
  for (int mu = 0; mu < 4; ++mu) r[mu] = conventions::kMetric[mu] * a[mu];
  return r;
}

double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

cd minkowski_dot(const CFourVector& a, const CFourVector& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

CFourVector complexify(const FourVector& z, double eps, const FourVector& u) {
  CFourVector w;
  for (int mu = 0; mu < 4; ++mu) w[mu] = cd(z[mu], eps * u[mu]);
  return w;
}

cd radius(const CFourVector& w) {
  const cd q = -minkowski_dot(w, w);
  if (q.imag() == 0.0 && q.real() <= 0.0) {
    throw DomainError("radius: -w.w = " + std::to_string(q.real()) +
                      " lies on the branch cut (-inf, 0]");
  }
  return std::sqrt(q);
}

const SpinorMatrix& gamma(int mu) { return gammas().at(static_cast<std::size_t>(mu)); }

SpinorMatrix gamma_lower(int mu) { return conventions::kMetric[mu] * gamma(mu); }

SpinorMatrix slash(const CFourVector& v) { return slash_covector(lower(v)); }

SpinorMatrix slash(const FourVector& v) { return slash_covector(lower(v)); }

SpinorMatrix slash_covector(const CFourVector& a) {
  const auto& g = gammas();
  return g[0] * a[0] + g[1] * a[1] + g[2] * a[2] + g[3] * a[3];
}

SpinorMatrix slash_covector(const FourVector& a) {
  const auto& g = gammas();
  return g[0] * a[0] + g[1] * a[1] + g[2] * a[2] + g[3] * a[3];
}

RealMatrix4 LorentzBoost::inverse() const {
  // Lambda^{-1} = g Lambda^T g for any Lorentz transformation.
  return metric() * Lambda.transpose() * metric();
}

LorentzBoost boost(double rapidity, int axis) {
  if (axis < 1 || axis > 3) throw ConfigError("boost: axis must be 1, 2 or 3");
  if (std::abs(rapidity) > 5.0) throw ConfigError("boost: |rapidity| must not exceed 5");
  LorentzBoost b;
  b.rapidity = rapidity;
  b.axis = axis;
  b.Lambda.setIdentity();
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  b.Lambda(0, 0) = ch;
  b.Lambda(axis, axis) = ch;
  b.Lambda(0, axis) = sh;
  b.Lambda(axis, 0) = sh;
  b.S = std::cosh(0.5 * rapidity) * SpinorMatrix::Identity() +
        conventions::kBoostGeneratorSign * std::sinh(0.5 * rapidity) * gamma(0) * gamma(axis);
  return b;
}

double max_abs(const SpinorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qedcs
