#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qedcs/clifford.hpp"

namespace qedcs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Space-like graph surface {(t(x), x) : x in R^3} with |grad t| <= v_max < 1.
class CauchySurface {
public:
  virtual ~CauchySurface() = default;
  virtual double t(const Vec3& x) const = 0;
  virtual Vec3 grad(const Vec3& x) const = 0;
  virtual Mat3 hessian(const Vec3& x) const = 0;
  // Declared uniform bound on |grad t|; check_gradient_bound samples it.
  virtual double v_max() const = 0;
  virtual bool is_flat() const { return false; }
  virtual std::string name() const = 0;
};

using SurfacePtr = std::shared_ptr<const CauchySurface>;

// t = t0.
class FlatSurface final : public CauchySurface {
public:
  explicit FlatSurface(double t0 = 0.0) : t0_(t0) {}
  double t(const Vec3&) const override { return t0_; }
  Vec3 grad(const Vec3&) const override { return Vec3::Zero(); }
  Mat3 hessian(const Vec3&) const override { return Mat3::Zero(); }
  double v_max() const override { return 0.0; }
  bool is_flat() const override { return true; }
  std::string name() const override { return "flat"; }

private:
  double t0_;
};

// t = height * exp(-|x - center|^2 / width^2).
class GaussianBumpSurface final : public CauchySurface {
public:
  GaussianBumpSurface(double height, double width, Vec3 center = Vec3::Zero());
  double t(const Vec3& x) const override;
  Vec3 grad(const Vec3& x) const override;
  Mat3 hessian(const Vec3& x) const override;
  double v_max() const override;
  std::string name() const override { return "gaussian_bump"; }

private:
  double h_, s_;
  Vec3 c_;
};

// t = slope * x^axis * exp(-|x|^2 / (2 width^2)): a tilt near the origin that
// flattens out at large |x|.
class TiltedBumpSurface final : public CauchySurface {
public:
  TiltedBumpSurface(double slope, double width, int axis = 1);
  double t(const Vec3& x) const override;
  Vec3 grad(const Vec3& x) const override;
  Mat3 hessian(const Vec3& x) const override;
  double v_max() const override;
  std::string name() const override { return "tilted_bump"; }

private:
  double a_, s_;
  int axis_;
};

FourVector embed(const CauchySurface& surface, const Vec3& x);
// Future-directed unit normal (1, grad t) / sqrt(1 - |grad t|^2).
FourVector normal(const CauchySurface& surface, const Vec3& x);
// d_j n^kappa for j = 1..3 (rows j-1), the normal being extended to R^4
// independently of x^0.
Eigen::Matrix<double, 3, 4> normal_spatial_derivatives(const CauchySurface& surface, const Vec3& x);
// Gamma(x) = gamma^0 - gamma^k d_k t.
SpinorMatrix gamma_weight(const CauchySurface& surface, const Vec3& x);
// Largest sampled |grad t| over a cube of half-width L; throws ConfigError when it exceeds v_max.
double check_gradient_bound(const CauchySurface& surface, double L, int samples_per_axis = 41);

enum class QuadratureRule { Midpoint, Gauss };

struct SupportBall {
  FourVector center = FourVector::Zero();
  double radius = 0.0;
};

struct SurfaceGrid {
  SurfacePtr surface;
  double L = 0.0;
  int N = 0;
  QuadratureRule rule = QuadratureRule::Midpoint;
  bool periodic = false;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  std::vector<FourVector> points;
  std::vector<FourVector> normals;
  std::vector<SpinorMatrix> Gamma;

  std::size_t size() const { return nodes.size(); }
  std::size_t dim() const { return 4 * nodes.size(); }
  double spacing() const { return 2.0 * L / N; }
  // y - x for nodes x = points[i], y = points[j]; with periodic grids the
  // spatial part is the minimum-image displacement.
  FourVector displacement(std::size_t i, std::size_t j) const;
};

using GridPtr = std::shared_ptr<const SurfaceGrid>;

// Tensor grid on [-L, L]^3 with N nodes per axis.  When supports are given,
// L must exceed every support ball's spatial extent by at least margin.
GridPtr make_grid(SurfacePtr surface, double L, int N, QuadratureRule rule = QuadratureRule::Midpoint,
                  bool periodic = false, const std::vector<SupportBall>& supports = {},
                  double margin = 0.0);

// One-parameter family of graph surfaces t(x, s).
class SurfaceFamily {
public:
  virtual ~SurfaceFamily() = default;
  virtual SurfacePtr slice(double s) const = 0;
  virtual double dt_ds(const Vec3& x, double s) const = 0;
  virtual Vec3 dgrad_ds(const Vec3& x, double s) const = 0;
  virtual std::string name() const = 0;
};

using FamilyPtr = std::shared_ptr<const SurfaceFamily>;

// The same surface for every s.
class StaticFamily final : public SurfaceFamily {
public:
  explicit StaticFamily(SurfacePtr s) : s_(std::move(s)) {}
  SurfacePtr slice(double) const override { return s_; }
  double dt_ds(const Vec3&, double) const override { return 0.0; }
  Vec3 dgrad_ds(const Vec3&, double) const override { return Vec3::Zero(); }
  std::string name() const override { return "static_" + s_->name(); }

private:
  SurfacePtr s_;
};

// t(x, s) = s.
class FlatTranslationFamily final : public SurfaceFamily {
public:
  SurfacePtr slice(double s) const override { return std::make_shared<FlatSurface>(s); }
  double dt_ds(const Vec3&, double) const override { return 1.0; }
  Vec3 dgrad_ds(const Vec3&, double) const override { return Vec3::Zero(); }
  std::string name() const override { return "flat_translation"; }
};

// t(x, s) = s * height * exp(-|x - center|^2 / width^2): flat at s = 0, curved at s = 1.
class BumpInterpolationFamily final : public SurfaceFamily {
public:
  BumpInterpolationFamily(double height, double width, Vec3 center = Vec3::Zero());
  SurfacePtr slice(double s) const override;
  double dt_ds(const Vec3& x, double s) const override;
  Vec3 dgrad_ds(const Vec3& x, double s) const override;
  std::string name() const override { return "bump_interpolation"; }

private:
  double h_, w_;
  Vec3 c_;
};

struct FamilyVelocity {
  double v = 0.0;
  FourVector n;
  FourVector dn_ds;  // derivative of the normal in the flow parameter at fixed x
};

// v = n^0 dt/ds, the normal projection of the slice velocity (dt/ds, 0).
FamilyVelocity family_velocity(const SurfaceFamily& family, const Vec3& x, double s);

}  // namespace qedcs
