#include "qedcs/surface.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "qedcs/errors.hpp"

namespace qedcs {

GaussianBumpSurface::GaussianBumpSurface(double height, double width, Vec3 center)
    : h_(height), s_(width), c_(std::move(center)) {
  if (!(width > 0.0)) throw ConfigError("gaussian_bump: width must be positive");
  if (!(v_max() < 1.0)) throw ConfigError("gaussian_bump: gradient bound must stay below 1");
}

double GaussianBumpSurface::t(const Vec3& x) const {
  return h_ * std::exp(-(x - c_).squaredNorm() / (s_ * s_));
}

Vec3 GaussianBumpSurface::grad(const Vec3& x) const {
  const Vec3 d = x - c_;
  return -2.0 * h_ * std::exp(-d.squaredNorm() / (s_ * s_)) / (s_ * s_) * d;
}

Mat3 GaussianBumpSurface::hessian(const Vec3& x) const {
  const Vec3 d = x - c_;
  const double s2 = s_ * s_;
  const double e = h_ * std::exp(-d.squaredNorm() / s2);
  return e * (4.0 / (s2 * s2) * d * d.transpose() - 2.0 / s2 * Mat3::Identity());
}

double GaussianBumpSurface::v_max() const {
  return std::sqrt(2.0) * std::abs(h_) * std::exp(-0.5) / s_;
}

TiltedBumpSurface::TiltedBumpSurface(double slope, double width, int axis)
    : a_(slope), s_(width), axis_(axis) {
  if (axis < 1 || axis > 3) throw ConfigError("tilted_bump: axis must be 1, 2 or 3");
  if (!(width > 0.0)) throw ConfigError("tilted_bump: width must be positive");
  if (!(std::abs(slope) < 1.0)) throw ConfigError("tilted_bump: |slope| must be below 1");
}

double TiltedBumpSurface::t(const Vec3& x) const {
  return a_ * x[axis_ - 1] * std::exp(-x.squaredNorm() / (2.0 * s_ * s_));
}

Vec3 TiltedBumpSurface::grad(const Vec3& x) const {
  const int k = axis_ - 1;
  const double s2 = s_ * s_;
  const double g = std::exp(-x.squaredNorm() / (2.0 * s2));
  Vec3 r = -x * (x[k] / s2);
  r[k] += 1.0;
  return a_ * g * r;
}

Mat3 TiltedBumpSurface::hessian(const Vec3& x) const {
  const int k = axis_ - 1;
  const double s2 = s_ * s_;
  const double g = std::exp(-x.squaredNorm() / (2.0 * s2));
  Mat3 H;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double dik = i == k ? 1.0 : 0.0, dij = i == j ? 1.0 : 0.0, djk = j == k ? 1.0 : 0.0;
      H(i, j) = -(dik * x[j] + dij * x[k]) / s2 - (djk - x[k] * x[j] / s2) * x[i] / s2;
    }
  }
  return a_ * g * H;
}

double TiltedBumpSurface::v_max() const { return std::abs(a_); }

FourVector embed(const CauchySurface& surface, const Vec3& x) {
  return FourVector(surface.t(x), x[0], x[1], x[2]);
}

FourVector normal(const CauchySurface& surface, const Vec3& x) {
  const Vec3 g = surface.grad(x);
  const double c = 1.0 / std::sqrt(1.0 - g.squaredNorm());
  return FourVector(c, c * g[0], c * g[1], c * g[2]);
}

namespace {

// Derivative of n = (1, g)/sqrt(1 - g.g) when g changes by dg.
FourVector normal_variation(const Vec3& g, const Vec3& dg) {
  const double q = 1.0 - g.squaredNorm();
  const double c = 1.0 / std::sqrt(q);
  const double gd = g.dot(dg);
  const double c3 = c / q;
  FourVector r;
  r[0] = gd * c3;
  for (int k = 0; k < 3; ++k) r[k + 1] = dg[k] * c + g[k] * gd * c3;
  return r;
}

}  // namespace

Eigen::Matrix<double, 3, 4> normal_spatial_derivatives(const CauchySurface& surface, const Vec3& x) {
  const Vec3 g = surface.grad(x);
  const Mat3 H = surface.hessian(x);
  Eigen::Matrix<double, 3, 4> r;
  for (int j = 0; j < 3; ++j) r.row(j) = normal_variation(g, H.row(j).transpose()).transpose();
  return r;
}

SpinorMatrix gamma_weight(const CauchySurface& surface, const Vec3& x) {
  const Vec3 g = surface.grad(x);
  return gamma(0) - g[0] * gamma(1) - g[1] * gamma(2) - g[2] * gamma(3);
}

double check_gradient_bound(const CauchySurface& surface, double L, int samples_per_axis) {
  double worst = 0.0;
  const int n = std::max(2, samples_per_axis);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec3 x(-L + 2.0 * L * a / (n - 1), -L + 2.0 * L * b / (n - 1), -L + 2.0 * L * c / (n - 1));
        worst = std::max(worst, surface.grad(x).norm());
      }
  if (worst > surface.v_max() * (1.0 + 1e-12) || !(surface.v_max() < 1.0)) {
    std::ostringstream os;
    os << surface.name() << ": sampled |grad t| = " << worst << " exceeds the declared bound "
       << surface.v_max();
    throw ConfigError(os.str());
  }
  return worst;
}

FourVector SurfaceGrid::displacement(std::size_t i, std::size_t j) const {
  FourVector d = points[j] - points[i];
  if (periodic) {
    // Ties at exactly half a period keep the raw difference, so that
    // displacement(j, i) == -displacement(i, j) holds exactly.
    const double P = 2.0 * L;
    const double cut = L * (1.0 + 1e-9);
    for (int k = 1; k < 4; ++k) {
      if (d[k] > cut) d[k] -= P;
      else if (d[k] < -cut) d[k] += P;
    }
  }
  return d;
}

namespace {

void axis_rule(double L, int N, QuadratureRule rule, std::vector<double>& x, std::vector<double>& w) {
  x.resize(N);
  w.resize(N);
  if (rule == QuadratureRule::Midpoint) {
    const double h = 2.0 * L / N;
    for (int i = 0; i < N; ++i) {
      x[i] = -L + (i + 0.5) * h;
      w[i] = h;
    }
    return;
  }
  // Gauss-Legendre nodes via Newton iteration on P_N.
  for (int i = 0; i < N; ++i) {
    double r = std::cos(M_PI * (i + 0.75) / (N + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = boost::math::legendre_p(N, r);
      const double dp = boost::math::legendre_p_prime(N, r);
      const double dr = p / dp;
      r -= dr;
      if (std::abs(dr) < 1e-16) break;
    }
    const double dp = boost::math::legendre_p_prime(N, r);
    x[N - 1 - i] = L * r;
    w[N - 1 - i] = L * 2.0 / ((1.0 - r * r) * dp * dp);
  }
}

}  // namespace

GridPtr make_grid(SurfacePtr surface, double L, int N, QuadratureRule rule, bool periodic,
                  const std::vector<SupportBall>& supports, double margin) {
  if (!surface) throw ConfigError("make_grid: surface is null");
  if (N < 4) throw ConfigError("make_grid: N must be at least 4");
  if (!(L > 0.0)) throw ConfigError("make_grid: L must be positive");
  if (periodic && rule != QuadratureRule::Midpoint)
    throw ConfigError("make_grid: periodic grids require the midpoint rule");
  if (periodic && !surface->is_flat()) throw ConfigError("make_grid: periodic grids require a flat surface");
  for (const auto& s : supports) {
    for (int k = 1; k < 4; ++k) {
      if (std::abs(s.center[k]) + s.radius + margin > L) {
        std::ostringstream os;
        os << "make_grid: L = " << L << " is smaller than field support extent "
           << std::abs(s.center[k]) + s.radius << " plus margin " << margin;
        throw ConfigError(os.str());
      }
    }
  }
  auto g = std::make_shared<SurfaceGrid>();
  g->surface = surface;
  g->L = L;
  g->N = N;
  g->rule = rule;
  g->periodic = periodic;
  std::vector<double> ax, aw;
  axis_rule(L, N, rule, ax, aw);
  const std::size_t n = static_cast<std::size_t>(N) * N * N;
  g->nodes.reserve(n);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const Vec3 x(ax[a], ax[b], ax[c]);
        g->nodes.push_back(x);
        g->weights.push_back(aw[a] * aw[b] * aw[c]);
        g->points.push_back(embed(*surface, x));
        g->normals.push_back(normal(*surface, x));
        g->Gamma.push_back(gamma_weight(*surface, x));
      }
  return g;
}

BumpInterpolationFamily::BumpInterpolationFamily(double height, double width, Vec3 center)
    : h_(height), w_(width), c_(std::move(center)) {
  GaussianBumpSurface probe(height, width, c_);
  (void)probe;
}

SurfacePtr BumpInterpolationFamily::slice(double s) const {
  return std::make_shared<GaussianBumpSurface>(s * h_, w_, c_);
}

double BumpInterpolationFamily::dt_ds(const Vec3& x, double) const {
  return h_ * std::exp(-(x - c_).squaredNorm() / (w_ * w_));
}

Vec3 BumpInterpolationFamily::dgrad_ds(const Vec3& x, double) const {
  const Vec3 d = x - c_;
  return -2.0 * h_ * std::exp(-d.squaredNorm() / (w_ * w_)) / (w_ * w_) * d;
}

FamilyVelocity family_velocity(const SurfaceFamily& family, const Vec3& x, double s) {
  const SurfacePtr sl = family.slice(s);
  FamilyVelocity r;
  r.n = normal(*sl, x);
  r.v = r.n[0] * family.dt_ds(x, s);
  r.dn_ds = normal_variation(sl->grad(x), family.dgrad_ds(x, s));
  return r;
}

}  // namespace qedcs
