#pragma once

#include <array>
#include <memory>
#include <vector>

#include "qedcs/clifford.hpp"
#include "qedcs/surface.hpp"

namespace qedcs {

// Mollifier bump phi(|x - center| / R) with phi(s) = exp(-1/(1 - s^2)) for |s| < 1,
// using the Euclidean norm on R^4.  Derivatives up to third order are exact.
struct Bump {
  FourVector center = FourVector::Zero();
  double radius = 1.0;

  double value(const FourVector& x) const;
  FourVector gradient(const FourVector& x) const;
  RealMatrix4 hessian(const FourVector& x) const;
  // T[a](b, c) = d_a d_b d_c phi.
  std::array<RealMatrix4, 4> third(const FourVector& x) const;
  bool inside(const FourVector& x) const;
};

// Covector potential A_mu(x) with exact derivatives.
//   value(x)[mu]            = A_mu(x)
//   jacobian(x)(mu, nu)     = d_mu A_nu(x)
//   hessian(x)[k](mu, nu)   = d_k d_mu A_nu(x)
class VectorPotential {
public:
  virtual ~VectorPotential() = default;
  virtual FourVector value(const FourVector& x) const = 0;
  virtual RealMatrix4 jacobian(const FourVector& x) const = 0;
  virtual std::array<RealMatrix4, 4> hessian(const FourVector& x) const = 0;
  // Balls in R^4 whose union contains the support.
  virtual std::vector<SupportBall> support() const = 0;
  bool vanishes_at(const FourVector& x) const;
};

using FieldPtr = std::shared_ptr<const VectorPotential>;

// A_mu = sum_k c^(k)_mu phi_k(x).
class BumpField final : public VectorPotential {
public:
  struct Term {
    FourVector amplitude;  // c_mu, lower index
    Bump bump;
  };
  BumpField() = default;
  explicit BumpField(std::vector<Term> terms) : terms_(std::move(terms)) {}
  FourVector value(const FourVector& x) const override;
  RealMatrix4 jacobian(const FourVector& x) const override;
  std::array<RealMatrix4, 4> hessian(const FourVector& x) const override;
  std::vector<SupportBall> support() const override;
  const std::vector<Term>& terms() const { return terms_; }

private:
  std::vector<Term> terms_;
};

// Scalar gauge function Omega = sum_k a_k phi_k(x).
class GaugeFunction {
public:
  struct Term {
    double amplitude = 0.0;
    Bump bump;
  };
  GaugeFunction() = default;
  explicit GaugeFunction(std::vector<Term> terms) : terms_(std::move(terms)) {}
  double value(const FourVector& x) const;
  FourVector gradient(const FourVector& x) const;  // d_mu Omega
  RealMatrix4 hessian(const FourVector& x) const;
  std::array<RealMatrix4, 4> third(const FourVector& x) const;
  std::vector<SupportBall> support() const;

private:
  std::vector<Term> terms_;
};

// A + dOmega.
class GaugedField final : public VectorPotential {
public:
  GaugedField(FieldPtr base, GaugeFunction omega) : base_(std::move(base)), omega_(std::move(omega)) {}
  FourVector value(const FourVector& x) const override;
  RealMatrix4 jacobian(const FourVector& x) const override;
  std::array<RealMatrix4, 4> hessian(const FourVector& x) const override;
  std::vector<SupportBall> support() const override;

private:
  FieldPtr base_;
  GaugeFunction omega_;
};

// A + B.
class SumField final : public VectorPotential {
public:
  SumField(FieldPtr a, FieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  FourVector value(const FourVector& x) const override;
  RealMatrix4 jacobian(const FourVector& x) const override;
  std::array<RealMatrix4, 4> hessian(const FourVector& x) const override;
  std::vector<SupportBall> support() const override;

private:
  FieldPtr a_, b_;
};

// delta A_mu = c phi(x) n_mu(x) with n the unit normal covector of a surface,
// extended to R^4 independently of x^0.  Its restriction to the tangent
// spaces of that surface vanishes.  Second derivatives are not provided.
class NormalPerturbation final : public VectorPotential {
public:
  NormalPerturbation(SurfacePtr surface, double amplitude, Bump bump)
      : surface_(std::move(surface)), c_(amplitude), bump_(bump) {}
  FourVector value(const FourVector& x) const override;
  RealMatrix4 jacobian(const FourVector& x) const override;
  std::array<RealMatrix4, 4> hessian(const FourVector& x) const override;
  std::vector<SupportBall> support() const override;

private:
  SurfacePtr surface_;
  double c_;
  Bump bump_;
};

FieldPtr zero_field();

// F_{mu nu} = d_mu A_nu - d_nu A_mu.
RealMatrix4 field_strength(const VectorPotential& A, const FourVector& x);
// E_mu = F_{mu nu} n^nu for a unit time-like n.
FourVector electric_field(const VectorPotential& A, const FourVector& x, const FourVector& n);
// dE(mu_row = derivative index k, column = mu) = d_k E_mu given d_k n (dn row k).
RealMatrix4 electric_field_derivatives(const VectorPotential& A, const FourVector& x, const FourVector& n,
                                       const RealMatrix4& dn);
FieldPtr gauge_transform(FieldPtr A, const GaugeFunction& omega);

// max over grid nodes and tangent vectors tau_k = (d_k t, e_k) of |(A - B)_mu tau_k^mu|.
double tangential_difference(const VectorPotential& A, const VectorPotential& B, const SurfaceGrid& grid);

}  // namespace qedcs
