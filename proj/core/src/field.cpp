#include "qedcs/field.hpp"

#include <algorithm>
#include <cmath>

#include "qedcs/errors.hpp"

namespace qedcs {

namespace {

struct BumpJet {
  double phi = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;  // derivatives in q
  FourVector q1 = FourVector::Zero();               // dq/dx^a
  double q2 = 0.0;                                  // d2q/dx^a dx^b = q2 delta_ab
};

BumpJet jet(const Bump& b, const FourVector& x) {
  BumpJet j;
  const FourVector d = x - b.center;
  const double R2 = b.radius * b.radius;
  const double q = d.squaredNorm() / R2;
  if (q >= 1.0) return j;
  const double a = 1.0 / (1.0 - q);
  j.phi = std::exp(-a);
  const double a2 = a * a, a3 = a2 * a, a4 = a2 * a2;
  j.d1 = -a2 * j.phi;
  j.d2 = (a4 - 2.0 * a3) * j.phi;
  j.d3 = (-a4 * a2 + 6.0 * a4 * a - 6.0 * a4) * j.phi;
  j.q1 = 2.0 / R2 * d;
  j.q2 = 2.0 / R2;
  return j;
}

}  // namespace

double Bump::value(const FourVector& x) const { return jet(*this, x).phi; }

FourVector Bump::gradient(const FourVector& x) const {
  const BumpJet j = jet(*this, x);
  return j.d1 * j.q1;
}

RealMatrix4 Bump::hessian(const FourVector& x) const {
  const BumpJet j = jet(*this, x);
  return j.d2 * j.q1 * j.q1.transpose() + j.d1 * j.q2 * RealMatrix4::Identity();
}

std::array<RealMatrix4, 4> Bump::third(const FourVector& x) const {
  const BumpJet j = jet(*this, x);
  std::array<RealMatrix4, 4> T;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const double dab = a == b ? j.q2 : 0.0, dac = a == c ? j.q2 : 0.0, dbc = b == c ? j.q2 : 0.0;
        T[a](b, c) = j.d3 * j.q1[a] * j.q1[b] * j.q1[c] +
                     j.d2 * (dab * j.q1[c] + dac * j.q1[b] + dbc * j.q1[a]);
      }
    }
  }
  return T;
}

bool Bump::inside(const FourVector& x) const { return (x - center).norm() < radius; }

bool VectorPotential::vanishes_at(const FourVector& x) const {
  for (const auto& s : support()) {
    if ((x - s.center).norm() < s.radius) return false;
  }
  return true;
}

FourVector BumpField::value(const FourVector& x) const {
  FourVector r = FourVector::Zero();
  for (const auto& t : terms_) r += t.bump.value(x) * t.amplitude;
  return r;
}

RealMatrix4 BumpField::jacobian(const FourVector& x) const {
  RealMatrix4 r = RealMatrix4::Zero();
  for (const auto& t : terms_) r += t.bump.gradient(x) * t.amplitude.transpose();
  return r;
}

std::array<RealMatrix4, 4> BumpField::hessian(const FourVector& x) const {
  std::array<RealMatrix4, 4> r;
  for (auto& m : r) m.setZero();
  for (const auto& t : terms_) {
    const RealMatrix4 H = t.bump.hessian(x);
    for (int k = 0; k < 4; ++k) r[k] += H.row(k).transpose() * t.amplitude.transpose();
  }
  return r;
}

std::vector<SupportBall> BumpField::support() const {
  std::vector<SupportBall> s;
  for (const auto& t : terms_) {
    if (t.amplitude.norm() > 0.0) s.push_back({t.bump.center, t.bump.radius});
  }
  return s;
}

double GaugeFunction::value(const FourVector& x) const {
  double r = 0.0;
  for (const auto& t : terms_) r += t.amplitude * t.bump.value(x);
  return r;
}

FourVector GaugeFunction::gradient(const FourVector& x) const {
  FourVector r = FourVector::Zero();
  for (const auto& t : terms_) r += t.amplitude * t.bump.gradient(x);
  return r;
}

RealMatrix4 GaugeFunction::hessian(const FourVector& x) const {
  RealMatrix4 r = RealMatrix4::Zero();
  for (const auto& t : terms_) r += t.amplitude * t.bump.hessian(x);
  return r;
}

std::array<RealMatrix4, 4> GaugeFunction::third(const FourVector& x) const {
  std::array<RealMatrix4, 4> r;
  for (auto& m : r) m.setZero();
  for (const auto& t : terms_) {
    const auto T = t.bump.third(x);
    for (int k = 0; k < 4; ++k) r[k] += t.amplitude * T[k];
  }
  return r;
}

std::vector<SupportBall> GaugeFunction::support() const {
  std::vector<SupportBall> s;
  for (const auto& t : terms_) {
    if (t.amplitude != 0.0) s.push_back({t.bump.center, t.bump.radius});
  }
  return s;
}

FourVector GaugedField::value(const FourVector& x) const { return base_->value(x) + omega_.gradient(x); }

RealMatrix4 GaugedField::jacobian(const FourVector& x) const {
  return base_->jacobian(x) + omega_.hessian(x);
}

std::array<RealMatrix4, 4> GaugedField::hessian(const FourVector& x) const {
  auto r = base_->hessian(x);
  const auto T = omega_.third(x);
  for (int k = 0; k < 4; ++k) r[k] += T[k];
  return r;
}

std::vector<SupportBall> GaugedField::support() const {
  auto s = base_->support();
  const auto o = omega_.support();
  s.insert(s.end(), o.begin(), o.end());
  return s;
}

FourVector SumField::value(const FourVector& x) const { return a_->value(x) + b_->value(x); }

RealMatrix4 SumField::jacobian(const FourVector& x) const { return a_->jacobian(x) + b_->jacobian(x); }

std::array<RealMatrix4, 4> SumField::hessian(const FourVector& x) const {
  auto r = a_->hessian(x);
  const auto h = b_->hessian(x);
  for (int k = 0; k < 4; ++k) r[k] += h[k];
  return r;
}

std::vector<SupportBall> SumField::support() const {
  auto s = a_->support();
  const auto o = b_->support();
  s.insert(s.end(), o.begin(), o.end());
  return s;
}

FourVector NormalPerturbation::value(const FourVector& x) const {
  const double p = bump_.value(x);
  if (p == 0.0) return FourVector::Zero();
  const Vec3 xs(x[1], x[2], x[3]);
  return c_ * p * lower(normal(*surface_, xs));
}

RealMatrix4 NormalPerturbation::jacobian(const FourVector& x) const {
  const double p = bump_.value(x);
  if (p == 0.0) return RealMatrix4::Zero();
  const Vec3 xs(x[1], x[2], x[3]);
  const FourVector nl = lower(normal(*surface_, xs));
  const auto dn = normal_spatial_derivatives(*surface_, xs);
  RealMatrix4 r = bump_.gradient(x) * nl.transpose();
  for (int j = 0; j < 3; ++j) r.row(j + 1) += p * lower(FourVector(dn.row(j).transpose())).transpose();
  return c_ * r;
}

std::array<RealMatrix4, 4> NormalPerturbation::hessian(const FourVector&) const {
  throw ConfigError("normal perturbation fields provide derivatives up to first order only");
}

std::vector<SupportBall> NormalPerturbation::support() const {
  if (c_ == 0.0) return {};
  return {{bump_.center, bump_.radius}};
}

FieldPtr zero_field() {
  static const FieldPtr z = std::make_shared<BumpField>();
  return z;
}

RealMatrix4 field_strength(const VectorPotential& A, const FourVector& x) {
  const RealMatrix4 J = A.jacobian(x);
  return J - J.transpose();
}

FourVector electric_field(const VectorPotential& A, const FourVector& x, const FourVector& n) {
  return field_strength(A, x) * n;
}

RealMatrix4 electric_field_derivatives(const VectorPotential& A, const FourVector& x, const FourVector& n,
                                       const RealMatrix4& dn) {
  const auto H = A.hessian(x);
  const RealMatrix4 F = field_strength(A, x);
  RealMatrix4 r;
  for (int k = 0; k < 4; ++k) {
    const RealMatrix4 dF = H[k] - H[k].transpose();
    r.row(k) = (dF * n + F * dn.row(k).transpose()).transpose();
  }
  return r;
}

FieldPtr gauge_transform(FieldPtr A, const GaugeFunction& omega) {
  return std::make_shared<GaugedField>(std::move(A), omega);
}

double tangential_difference(const VectorPotential& A, const VectorPotential& B, const SurfaceGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const FourVector d = A.value(grid.points[i]) - B.value(grid.points[i]);
    const Vec3 g = grid.surface->grad(grid.nodes[i]);
    for (int k = 0; k < 3; ++k) {
      // tau_k = (d_k t, e_k); (A - B)_mu tau^mu with lower-index covector components.
      const double c = d[0] * g[k] + d[k + 1];
      worst = std::max(worst, std::abs(c));
    }
  }
  return worst;
}

}  // namespace qedcs
