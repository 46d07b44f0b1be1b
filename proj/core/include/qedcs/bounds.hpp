#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qedcs/clifford.hpp"

namespace qedcs::bounds {

enum class BoundKind {
  Upper,  // |lhs| <= C shape: fitted C = max ratio must be finite
  Lower,  // |lhs| >= c shape: fitted c = min ratio must be positive
  Exact,  // an inequality with explicit constants: max ratio <= 1 up to rounding
};

struct BoundCheck {
  std::string name;
  BoundKind kind = BoundKind::Upper;
  std::size_t samples = 0;
  double constant = 0.0;  // max ratio (Upper, Exact) or min ratio (Lower)
  bool holds = false;
};

struct SampleSpec {
  std::size_t count = 10000;
  std::uint64_t seed = 1;
  double mass = 1.0;
  double v_max = 0.6;     // |z^0| <= v_max |z|
  double z_min = 0.05;    // log-uniform |z| range
  double z_max = 8.0;
  double eps_max = 1.0;   // eps log-uniform in [1e-4, eps_max], one sample in five at eps = 0
  double u_rapidity_max = 1.0;  // u = -(cosh a, sinh a n) with a <= this
};

// A sampled kernel argument w = z + i eps u.
struct KernelSample {
  FourVector z;
  double eps = 0.0;
  FourVector u;
};

std::vector<KernelSample> sample_kernel_arguments(const SampleSpec& spec);

// Upper bounds on D, its derivatives and p^- with the decay constant
// c = (m/2) sqrt(1 - v_max^2), each fitted over the samples:
//   wwD            |w^mu w^nu D|                        <= C e^{-c|z|}
//   D              |D|                                  <= C e^{-c|z|} / |z|^2
//   r2partialD     |r^2 d_mu D|                         <= C e^{-c|z|} / |z|
//   partialD       |d_mu D|                             <= C e^{-c|z|} / max(|z|, eps)^3
//   wpartialD      |w^nu d_mu D|                        <= C e^{-c|z|} / max(|z|, eps)^2
//   uD             |eps u^mu d_nu D|                    <= C sqrt(eps) e^{-c|z|} / |z|^{5/2}
//   dr2D           |d_nu [r^2 d_mu D]|                  <= C e^{-c|z|} / |z|^2
//   pminus         ||p^-(w)||                           <= C e^{-c|z|} / |z|^3
// with |z| the spatial norm.
std::vector<BoundCheck> kernel_upper_bounds(const SampleSpec& spec);

// Inequalities for r(w) with explicit constants:
//   r1             max(r(z), eps sqrt(u.u)) <= sqrt(-z.z + eps^2 u.u) <= Re r(w) <= |r(w)|
//   r2             1 <= |w| / |r(w)| <= (|u| / sqrt(u.u)) (|z| / r(z))
//   rz             sqrt(1 - v^2)|z| <= r(z) <= |z| <= |z|_4 <= sqrt(1 + v^2)|z|
std::vector<BoundCheck> radius_inequalities(const SampleSpec& spec);

// K1 controls on C minus (-inf, 0] for |xi| in [0.05, 50]:
//   K1             |K1(xi)| <= e^{-Re xi} (1/|xi| + sqrt(pi / 2|xi|))
//   partialK1      |d/dxi K1(xi)/xi| <= e^{-Re xi} (2^{3/2}/|xi|^3 + 2 sqrt(pi) |xi|^{-3/2})
// and for real xi > 0:
//   K1lower        K1(xi) >= e^{-xi} / xi
//   partialK1lower -d/dxi K1(xi)/xi >= 2 e^{-xi} / xi^3
std::vector<BoundCheck> k1_bounds(const SampleSpec& spec);

// ||p^-(z)|| >= c e^{-m|z|} / |z|^3 for real space-like z with |z| in [0.1, 5].
BoundCheck pminus_lower_bound(const SampleSpec& spec);

// Every check above.
std::vector<BoundCheck> all_bounds(const SampleSpec& spec);

}  // namespace qedcs::bounds
