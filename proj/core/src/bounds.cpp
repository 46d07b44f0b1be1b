#include "qedcs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "qedcs/bessel.hpp"
#include "qedcs/errors.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/parallel.hpp"

namespace qedcs::bounds {

namespace {

constexpr double kExactTol = 1e-10;

void require_samples(const SampleSpec& spec) {
  if (spec.count == 0) throw ConfigError("bounds: sample count must be positive");
  if (!(spec.mass > 0.0)) throw ConfigError("bounds: mass must be positive");
  if (!(spec.v_max >= 0.0 && spec.v_max < 1.0)) throw ConfigError("bounds: v_max must lie in [0, 1)");
  if (!(spec.z_min > 0.0 && spec.z_max > spec.z_min)) throw ConfigError("bounds: need 0 < z_min < z_max");
  if (!(spec.eps_max > 1e-4)) throw ConfigError("bounds: eps_max must exceed 1e-4");
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 d;
  do {
    d = Vec3(g(rng), g(rng), g(rng));
  } while (d.norm() < 1e-12);
  return d.normalized();
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(std::log(lo), std::log(hi));
  return std::exp(U(rng));
}

// Ratio statistics, ignoring samples where both sides vanish.
struct Ratio {
  double max = 0.0;
  double min = std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  void add(double lhs, double shape) {
    if (lhs == 0.0 && shape == 0.0) return;
    const double r = lhs / shape;
    max = std::max(max, r);
    min = std::min(min, r);
    ++n;
  }
  void merge(const Ratio& o) {
    max = std::max(max, o.max);
    min = std::min(min, o.min);
    n += o.n;
  }
};

BoundCheck finish(const std::string& name, BoundKind kind, const Ratio& r) {
  BoundCheck b;
  b.name = name;
  b.kind = kind;
  b.samples = r.n;
  switch (kind) {
    case BoundKind::Upper:
      b.constant = r.max;
      b.holds = r.n > 0 && std::isfinite(r.max);
      break;
    case BoundKind::Lower:
      b.constant = r.min;
      b.holds = r.n > 0 && std::isfinite(r.min) && r.min > 0.0;
      break;
    case BoundKind::Exact:
      b.constant = r.max;
      b.holds = r.n > 0 && r.max <= 1.0 + kExactTol;
      break;
  }
  return b;
}

// Runs `fn` over the samples in parallel, one Ratio vector per sample, and merges.
std::vector<Ratio> gather(std::size_t count, std::size_t checks,
                          const std::function<void(std::size_t, std::vector<Ratio>&)>& fn) {
  std::vector<std::vector<Ratio>> per(count, std::vector<Ratio>(checks));
  parallel_for(count, [&](std::size_t k) { fn(k, per[k]); });
  std::vector<Ratio> total(checks);
  for (const auto& p : per)
    for (std::size_t c = 0; c < checks; ++c) total[c].merge(p[c]);
  return total;
}

double spatial_norm(const FourVector& z) { return z.tail<3>().norm(); }

double op_norm4(const SpinorMatrix& m) { return Eigen::JacobiSVD<SpinorMatrix>(m).singularValues()(0); }

}  // namespace

std::vector<KernelSample> sample_kernel_arguments(const SampleSpec& spec) {
  require_samples(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<KernelSample> out(spec.count);
  for (auto& s : out) {
    const double zn = log_uniform(rng, spec.z_min, spec.z_max);
    const Vec3 d = random_direction(rng);
    const double z0 = spec.v_max * zn * (2.0 * U(rng) - 1.0);
    s.z = FourVector(z0, zn * d.x(), zn * d.y(), zn * d.z());
    s.eps = U(rng) < 0.2 ? 0.0 : log_uniform(rng, 1e-4, spec.eps_max);
    const double a = spec.u_rapidity_max * U(rng);
    const Vec3 e = random_direction(rng);
    s.u = -FourVector(std::cosh(a), std::sinh(a) * e.x(), std::sinh(a) * e.y(), std::sinh(a) * e.z());
  }
  return out;
}

std::vector<BoundCheck> kernel_upper_bounds(const SampleSpec& spec) {
  const std::vector<KernelSample> samples = sample_kernel_arguments(spec);
  const double m = spec.mass;
  const double c = 0.5 * m * std::sqrt(1.0 - spec.v_max * spec.v_max);
  enum { WWD, DD, R2PD, PD, WPD, UD, DR2D, PM, COUNT };
  const std::vector<Ratio> r = gather(samples.size(), COUNT, [&](std::size_t k, std::vector<Ratio>& out) {
    const KernelSample& s = samples[k];
    const CFourVector w = complexify(s.z, s.eps, s.u);
    const DEval d = d_eval(w, m);
    const double zn = spatial_norm(s.z);
    const double decay = std::exp(-c * zn);
    const cd r2 = -minkowski_dot(w, w);
    double ww = 0.0, g = 0.0, r2g = 0.0, wg = 0.0, ug = 0.0, dr2 = 0.0;
    const CFourVector wl = lower(w);
    for (int mu = 0; mu < 4; ++mu) {
      g = std::max(g, std::abs(d.grad[mu]));
      r2g = std::max(r2g, std::abs(r2 * d.grad[mu]));
      for (int nu = 0; nu < 4; ++nu) {
        ww = std::max(ww, std::abs(w[mu] * w[nu] * d.D));
        wg = std::max(wg, std::abs(w[nu] * d.grad[mu]));
        ug = std::max(ug, std::abs(s.eps * s.u[mu] * d.grad[nu]));
        dr2 = std::max(dr2, std::abs(-2.0 * wl[nu] * d.grad[mu] + r2 * d.hess(nu, mu)));
      }
    }
    const double zeps = std::max(zn, s.eps);
    out[WWD].add(ww, decay);
    out[DD].add(std::abs(d.D), decay / (zn * zn));
    out[R2PD].add(r2g, decay / zn);
    out[PD].add(g, decay / (zeps * zeps * zeps));
    out[WPD].add(wg, decay / (zeps * zeps));
    out[UD].add(ug, std::sqrt(s.eps) * decay / std::pow(zn, 2.5));
    out[DR2D].add(dr2, decay / (zn * zn));
    out[PM].add(op_norm4(p_minus(d, m)), decay / (zn * zn * zn));
  });
  return {finish("wwD", BoundKind::Upper, r[WWD]),          finish("D", BoundKind::Upper, r[DD]),
          finish("r2partialD", BoundKind::Upper, r[R2PD]),  finish("partialD", BoundKind::Upper, r[PD]),
          finish("wpartialD", BoundKind::Upper, r[WPD]),    finish("uD", BoundKind::Upper, r[UD]),
          finish("dr2D", BoundKind::Upper, r[DR2D]),        finish("pminus", BoundKind::Upper, r[PM])};
}

std::vector<BoundCheck> radius_inequalities(const SampleSpec& spec) {
  const std::vector<KernelSample> samples = sample_kernel_arguments(spec);
  const double v = spec.v_max;
  enum { R1, R2, RZ, COUNT };
  const std::vector<Ratio> r = gather(samples.size(), COUNT, [&](std::size_t k, std::vector<Ratio>& out) {
    const KernelSample& s = samples[k];
    const CFourVector w = complexify(s.z, s.eps, s.u);
    const double zz = minkowski_dot(s.z, s.z);
    const double uu = minkowski_dot(s.u, s.u);
    const double rz = std::sqrt(-zz);
    const cd rw = radius(w);
    const double mid = std::sqrt(-zz + s.eps * s.eps * uu);
    out[R1].add(std::max(rz, s.eps * std::sqrt(uu)), mid);
    out[R1].add(mid, rw.real());
    out[R1].add(rw.real(), std::abs(rw));
    const double wn = w.norm();
    out[R2].add(std::abs(rw), wn);
    out[R2].add(wn / std::abs(rw), (s.u.norm() / std::sqrt(uu)) * (s.z.norm() / rz));
    const double zs = spatial_norm(s.z);
    out[RZ].add(std::sqrt(1.0 - v * v) * zs, rz);
    out[RZ].add(rz, zs);
    out[RZ].add(zs, s.z.norm());
    out[RZ].add(s.z.norm(), std::sqrt(1.0 + v * v) * zs);
  });
  return {finish("r1", BoundKind::Exact, r[R1]), finish("r2", BoundKind::Exact, r[R2]),
          finish("rz", BoundKind::Exact, r[RZ])};
}

std::vector<BoundCheck> k1_bounds(const SampleSpec& spec) {
  require_samples(spec);
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<cd> xs(spec.count);
  std::vector<double> xr(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    const double rad = log_uniform(rng, 0.05, 50.0);
    const double arg = 0.95 * std::numbers::pi * (2.0 * U(rng) - 1.0);
    xs[k] = std::polar(rad, arg);
    xr[k] = log_uniform(rng, 0.05, 50.0);
  }
  enum { K1U, DK1U, K1L, DK1L, COUNT };
  const double pi = std::numbers::pi;
  const std::vector<Ratio> r = gather(spec.count, COUNT, [&](std::size_t k, std::vector<Ratio>& out) {
    const cd xi = xs[k];
    const BesselEval b = f_and_derivatives(xi);
    const double a = std::abs(xi);
    const double e = std::exp(-xi.real());
    out[K1U].add(std::abs(b.value), e * (1.0 / a + std::sqrt(pi / (2.0 * a))));
    out[DK1U].add(std::abs(b.df), e * (std::pow(2.0, 1.5) / (a * a * a) + 2.0 * std::sqrt(pi) * std::pow(a, -1.5)));
    const double x = xr[k];
    const BesselEval br = f_and_derivatives(cd(x, 0.0));
    out[K1L].add(std::exp(-x) / x, br.value.real());
    out[DK1L].add(2.0 * std::exp(-x) / (x * x * x), -br.df.real());
  });
  return {finish("K1", BoundKind::Exact, r[K1U]), finish("partialK1", BoundKind::Exact, r[DK1U]),
          finish("K1lower", BoundKind::Exact, r[K1L]), finish("partialK1lower", BoundKind::Exact, r[DK1L])};
}

BoundCheck pminus_lower_bound(const SampleSpec& spec) {
  SampleSpec s = spec;
  s.z_min = 0.1;
  s.z_max = 5.0;
  const std::vector<KernelSample> samples = sample_kernel_arguments(s);
  const double m = spec.mass;
  const std::vector<Ratio> r = gather(samples.size(), 1, [&](std::size_t k, std::vector<Ratio>& out) {
    const FourVector& z = samples[k].z;
    const double zn = spatial_norm(z);
    const SpinorMatrix p = p_minus(complexify(z, 0.0, default_u()), m);
    out[0].add(op_norm4(p), std::exp(-m * zn) / (zn * zn * zn));
  });
  return finish("pminuslower", BoundKind::Lower, r[0]);
}

std::vector<BoundCheck> all_bounds(const SampleSpec& spec) {
  std::vector<BoundCheck> out = kernel_upper_bounds(spec);
  for (auto& b : radius_inequalities(spec)) out.push_back(b);
  for (auto& b : k1_bounds(spec)) out.push_back(b);
  out.push_back(pminus_lower_bound(spec));
  return out;
}

}  // namespace qedcs::bounds
