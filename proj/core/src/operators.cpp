#include "qedcs/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "qedcs/errors.hpp"
#include "qedcs/parallel.hpp"

namespace qedcs {

namespace {

using linalg::Matrix;

const cd I(0.0, 1.0);

void require_same_grid(const DiscretizedOperator& a, const DiscretizedOperator& b, const char* what) {
  if (a.grid != b.grid || a.dim() != b.dim()) throw GridMismatch(std::string(what) + ": operators live on different grids");
}

// Per-node square roots of the Gram blocks w_i gamma^0 Gamma_i.
struct GramRoots {
  std::vector<SpinorMatrix> sqrt, inv_sqrt;
  bool scalar = false;  // flat grid with uniform weights: both are multiples of 1
};

GramRoots gram_roots(const SurfaceGrid& g) {
  GramRoots r;
  const std::size_t n = g.size();
  r.sqrt.resize(n);
  r.inv_sqrt.resize(n);
  bool uniform = g.surface->is_flat();
  for (std::size_t i = 0; i < n && uniform; ++i) uniform = g.weights[i] == g.weights[0];
  r.scalar = uniform;
  for (std::size_t i = 0; i < n; ++i) {
    const SpinorMatrix G = g.weights[i] * gamma(0) * g.Gamma[i];
    Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(0.5 * (G + G.adjoint()));
    const Eigen::Vector4d ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0) throw DomainError("gram_roots: weight gamma^0 Gamma is not positive definite");
    const SpinorMatrix V = es.eigenvectors();
    r.sqrt[i] = V * ev.cwiseSqrt().cast<cd>().asDiagonal() * V.adjoint();
    r.inv_sqrt[i] = V * ev.cwiseSqrt().cwiseInverse().cast<cd>().asDiagonal() * V.adjoint();
  }
  return r;
}

Matrix conjugate_blocks(const Matrix& M, const std::vector<SpinorMatrix>& left, const std::vector<SpinorMatrix>& right) {
  const Eigen::Index n = static_cast<Eigen::Index>(left.size());
  Matrix out(M.rows(), M.cols());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t jj) {
    const Eigen::Index j = static_cast<Eigen::Index>(jj);
    for (Eigen::Index i = 0; i < n; ++i)
      out.block<4, 4>(4 * i, 4 * j) = left[i] * M.block<4, 4>(4 * i, 4 * j) * right[j];
  });
  return out;
}

// Integer minimum-image offset consistent with SurfaceGrid::displacement.
int min_image(int off, int N) {
  if (2 * off > N) return off - N;
  if (2 * off < -N) return off + N;
  return off;
}

struct NodeIndex {
  int a, b, c;
};

NodeIndex node_index(std::size_t i, int N) {
  const int ii = static_cast<int>(i);
  return {ii / (N * N), (ii / N) % N, ii % N};
}

// Assembly of a translation-invariant kernel k(z) on a flat periodic grid,
// evaluating k once per minimum-image offset.
DiscretizedOperator assemble_periodic(const std::function<SpinorMatrix(const FourVector&)>& k, GridPtr grid,
                                      DiagonalRule rule) {
  const SurfaceGrid& g = *grid;
  const int N = g.N;
  const int span = N + 1;
  const double h = g.spacing();
  std::vector<SpinorMatrix> table(static_cast<std::size_t>(span) * span * span);
  const int half = N / 2;
  parallel_for(table.size(), [&](std::size_t t) {
    const int ta = static_cast<int>(t) / (span * span) - half;
    const int tb = (static_cast<int>(t) / span) % span - half;
    const int tc = static_cast<int>(t) % span - half;
    if (ta == 0 && tb == 0 && tc == 0 && rule == DiagonalRule::Exclude) {
      table[t].setZero();
      return;
    }
    if (std::abs(ta) > half || std::abs(tb) > half || std::abs(tc) > half) return;
    // Offsets of exactly half a period have two nearest images per axis; the
    // kernel is averaged over them so the matrix is exactly circulant.
    const int off[3] = {ta, tb, tc};
    std::vector<std::array<double, 3>> images{{0.0, 0.0, 0.0}};
    for (int ax = 0; ax < 3; ++ax) {
      std::vector<std::array<double, 3>> next;
      for (auto im : images) {
        im[ax] = off[ax] * h;
        next.push_back(im);
        if (2 * std::abs(off[ax]) == N) {
          im[ax] = -off[ax] * h;
          next.push_back(im);
        }
      }
      images = std::move(next);
    }
    SpinorMatrix acc = SpinorMatrix::Zero();
    for (const auto& im : images) acc += k(FourVector(0.0, im[0], im[1], im[2]));
    table[t] = acc / static_cast<double>(images.size()) * gamma(0) * g.weights[0];
  });
  DiscretizedOperator op{grid, Matrix(g.dim(), g.dim())};
  const std::size_t n = g.size();
  parallel_for(n, [&](std::size_t j) {
    const NodeIndex nj = node_index(j, N);
    for (std::size_t i = 0; i < n; ++i) {
      const NodeIndex ni = node_index(i, N);
      const int da = min_image(nj.a - ni.a, N) + half;
      const int db = min_image(nj.b - ni.b, N) + half;
      const int dc = min_image(nj.c - ni.c, N) + half;
      op.matrix.block<4, 4>(4 * i, 4 * j) = table[(static_cast<std::size_t>(da) * span + db) * span + dc];
    }
  });
  return op;
}

SpinorMatrix p_minus_reflected(const DEval& d, double m) {
  // p^-(-w) for real w: D is even and its gradient odd.
  return (I * slash_covector(d.grad) + m * d.D * SpinorMatrix::Identity()) / (2.0 * m);
}

std::vector<FourVector> node_potentials(const VectorPotential& A, const SurfaceGrid& g) {
  std::vector<FourVector> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = A.vanishes_at(g.points[i]) ? FourVector::Zero() : A.value(g.points[i]);
  return v;
}

double trace_weight(const cd& c, const SpinorMatrix& k, const SpinorMatrix& Ai, const SpinorMatrix& Bj) {
  // |c|^2 trace[k^dagger (gamma^0 Gamma_i) k (Gamma_j gamma^0)]
  return std::norm(c) * (k.adjoint() * Ai * k * Bj).trace().real();
}

Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic> dft_axis_matrix(const SurfaceGrid& g, bool inverse) {
  const int N = g.N;
  const double h = g.spacing();
  Eigen::MatrixXcd F(N, N);
  for (int k = 0; k < N; ++k) {
    const int nk = k < (N + 1) / 2 ? k : k - N;
    const double p = 2.0 * std::numbers::pi * nk / (2.0 * g.L);
    for (int a = 0; a < N; ++a) {
      const double x = -g.L + (a + 0.5) * h;
      F(k, a) = std::exp(cd(0.0, inverse ? p * x : -p * x)) / std::sqrt(static_cast<double>(N));
    }
  }
  return F;
}

}  // namespace

DiscretizedOperator assemble(const KernelFn& kernel, GridPtr grid, DiagonalRule rule) {
  const SurfaceGrid& g = *grid;
  const std::size_t n = g.size();
  DiscretizedOperator op{grid, Matrix(g.dim(), g.dim())};
  parallel_for(n, [&](std::size_t j) {
    const SpinorMatrix right = g.Gamma[j] * g.weights[j];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j && rule == DiagonalRule::Exclude) {
        op.matrix.block<4, 4>(4 * i, 4 * j).setZero();
        continue;
      }
      try {
        op.matrix.block<4, 4>(4 * i, 4 * j) = kernel(i, j) * right;
      } catch (const DomainError& e) {
        std::ostringstream os;
        os << "assemble: kernel failed at nodes (" << i << ", " << j << "): " << e.what();
        throw DomainError(os.str());
      }
    }
  });
  return op;
}

Matrix normalized(const DiscretizedOperator& op) {
  const GramRoots r = gram_roots(*op.grid);
  if (r.scalar) return op.matrix;
  return conjugate_blocks(op.matrix, r.sqrt, r.inv_sqrt);
}

Matrix denormalized(const SurfaceGrid& grid, const Matrix& n) {
  const GramRoots r = gram_roots(grid);
  if (r.scalar) return n;
  return conjugate_blocks(n, r.inv_sqrt, r.sqrt);
}

double hs_norm(const DiscretizedOperator& op) { return normalized(op).norm(); }

double hs_norm_kernel(const KernelFn& kernel, const SurfaceGrid& g,
                      const std::function<bool(std::size_t, std::size_t)>& active) {
  const std::size_t n = g.size();
  std::vector<SpinorMatrix> A(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    A[i] = gamma(0) * g.Gamma[i];
    B[i] = g.Gamma[i] * gamma(0);
  }
  std::vector<double> partial(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (active && !active(i, j))) continue;
      s += g.weights[i] * g.weights[j] * trace_weight(1.0, kernel(i, j), A[i], B[j]);
    }
    partial[i] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(std::max(total, 0.0));
}

double op_norm(const DiscretizedOperator& op) { return linalg::spectral_norm(normalized(op)); }

std::vector<double> singular_values(const DiscretizedOperator& op, int count) {
  const Eigen::VectorXd s = linalg::svd(normalized(op));
  const Eigen::Index k = count > 0 ? std::min<Eigen::Index>(count, s.size()) : s.size();
  return std::vector<double>(s.data(), s.data() + k);
}

double projector_defect(const DiscretizedOperator& op) {
  const Matrix N = normalized(op);
  return linalg::spectral_norm(N * N - N);
}

double self_adjoint_defect(const DiscretizedOperator& op) {
  const Matrix N = normalized(op);
  return linalg::hermitian_norm(I * (N - N.adjoint()));
}

double skew_adjoint_defect(const DiscretizedOperator& op) {
  const Matrix N = normalized(op);
  return linalg::hermitian_norm(N + N.adjoint());
}

HSReport hs_report(const DiscretizedOperator& op, int top, bool with_projector_defect) {
  HSReport r;
  const Matrix N = normalized(op);
  r.hs_norm = N.norm();
  const Eigen::VectorXd s = linalg::svd(N);
  r.op_norm = s.size() ? s[0] : 0.0;
  const Eigen::Index k = std::min<Eigen::Index>(top, s.size());
  r.top_singular_values.assign(s.data(), s.data() + k);
  if (with_projector_defect) r.projector_defect = linalg::spectral_norm(N * N - N);
  return r;
}

DiscretizedOperator operator+(const DiscretizedOperator& a, const DiscretizedOperator& b) {
  require_same_grid(a, b, "operator+");
  return {a.grid, a.matrix + b.matrix, a.weight_convention, a.approximate || b.approximate};
}

DiscretizedOperator operator-(const DiscretizedOperator& a, const DiscretizedOperator& b) {
  require_same_grid(a, b, "operator-");
  return {a.grid, a.matrix - b.matrix, a.weight_convention, a.approximate || b.approximate};
}

DiscretizedOperator operator*(const DiscretizedOperator& a, const DiscretizedOperator& b) {
  require_same_grid(a, b, "operator*");
  return {a.grid, a.matrix * b.matrix, a.weight_convention, a.approximate || b.approximate};
}

SpinorMatrix negative_energy_symbol(const Vec3& p, double m) {
  const double E = std::sqrt(p.squaredNorm() + m * m);
  SpinorMatrix h = m * gamma(0);
  for (int k = 1; k < 4; ++k) h += p[k - 1] * gamma(0) * gamma(k);
  return 0.5 * (SpinorMatrix::Identity() - h / E);
}

Vec3 lattice_momentum(const Vec3& p, double h, LatticeSymbol symbol) {
  if (symbol == LatticeSymbol::Exact) return p;
  return Vec3(std::sin(p.x() * h) / h, std::sin(p.y() * h) / h, std::sin(p.z() * h) / h);
}

namespace {

// Blocks of the flat spectral projector as a function of the periodic index
// offset of x_i - x_j.
struct FlatOracleTable {
  int N = 0;
  std::vector<SpinorMatrix> blocks;

  const SpinorMatrix& operator()(const NodeIndex& ni, const NodeIndex& nj) const {
    const int da = ((ni.a - nj.a) % N + N) % N;
    const int db = ((ni.b - nj.b) % N + N) % N;
    const int dc = ((ni.c - nj.c) % N + N) % N;
    return blocks[(static_cast<std::size_t>(da) * N + db) * N + dc];
  }
};

FlatOracleTable flat_oracle_table(const SurfaceGrid& g, double m, LatticeSymbol symbol, const char* who) {
  if (!g.surface->is_flat() || !g.periodic || g.rule != QuadratureRule::Midpoint)
    throw ConfigError(std::string(who) + ": requires a flat periodic midpoint grid");
  const int N = g.N;
  const double h = g.spacing();
  const double dp = 2.0 * std::numbers::pi / (2.0 * g.L);
  std::vector<Vec3> momenta;
  std::vector<SpinorMatrix> symbols;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        auto wrap = [N](int k) { return k < (N + 1) / 2 ? k : k - N; };
        const Vec3 p(dp * wrap(a), dp * wrap(b), dp * wrap(c));
        momenta.push_back(p);
        symbols.push_back(negative_energy_symbol(lattice_momentum(p, h, symbol), m));
      }
  const double norm = 1.0 / (static_cast<double>(N) * N * N);
  FlatOracleTable table;
  table.N = N;
  table.blocks.resize(static_cast<std::size_t>(N) * N * N);
  parallel_for(table.blocks.size(), [&](std::size_t t) {
    const NodeIndex o = node_index(t, N);
    const Vec3 d(o.a * h, o.b * h, o.c * h);
    SpinorMatrix s = SpinorMatrix::Zero();
    for (std::size_t k = 0; k < momenta.size(); ++k) s += std::exp(cd(0.0, momenta[k].dot(d))) * symbols[k];
    table.blocks[t] = s * norm;
  });
  return table;
}

}  // namespace

DiscretizedOperator pminus_flat_oracle(GridPtr grid, double m, LatticeSymbol symbol) {
  const SurfaceGrid& g = *grid;
  const FlatOracleTable table = flat_oracle_table(g, m, symbol, "pminus_flat_oracle");
  const int N = g.N;
  DiscretizedOperator op{grid, Matrix(g.dim(), g.dim())};
  const std::size_t n = g.size();
  parallel_for(n, [&](std::size_t j) {
    const NodeIndex nj = node_index(j, N);
    for (std::size_t i = 0; i < n; ++i) op.matrix.block<4, 4>(4 * i, 4 * j) = table(node_index(i, N), nj);
  });
  return op;
}

DiscretizedOperator delta_p_lattice(GridPtr grid, const VectorPotential& A, double m, LatticeSymbol symbol) {
  const SurfaceGrid& g = *grid;
  const FlatOracleTable table = flat_oracle_table(g, m, symbol, "delta_p_lattice");
  const int N = g.N;
  const std::size_t n = g.size();
  const std::vector<FourVector> Av = node_potentials(A, g);
  std::vector<char> act(n);
  for (std::size_t i = 0; i < n; ++i) act[i] = Av[i].squaredNorm() > 0.0;
  DiscretizedOperator op{grid, Matrix::Zero(g.dim(), g.dim())};
  parallel_for(n, [&](std::size_t i) {
    const NodeIndex ni = node_index(i, N);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!act[i] && !act[j]) continue;
      const double lam = lambda_from_values(Av[i], Av[j], -g.displacement(i, j));
      if (lam == 0.0) continue;
      const NodeIndex nj = node_index(j, N);
      const cd phase = std::exp(cd(0.0, -lam)) - 1.0;
      op.matrix.block<4, 4>(4 * i, 4 * j) = phase * table(ni, nj);
      op.matrix.block<4, 4>(4 * j, 4 * i) = std::conj(phase) * table(nj, ni);
    }
  });
  return op;
}

DiscretizedOperator pminus_regularized(GridPtr grid, double eps, double m, const FourVector& u) {
  if (!(eps > 0.0)) throw DomainError("pminus_regularized: eps must be positive");
  if (grid->periodic && grid->surface->is_flat()) {
    return assemble_periodic([&](const FourVector& z) { return p_minus(complexify(z, eps, u), m); }, grid,
                             DiagonalRule::Limit);
  }
  const SurfaceGrid& g = *grid;
  return assemble([&](std::size_t i, std::size_t j) { return p_minus(complexify(g.displacement(i, j), eps, u), m); },
                  grid, DiagonalRule::Limit);
}

DiscretizedOperator pminus_extrapolated(GridPtr grid, double eps0, double m) {
  const DiscretizedOperator p1 = pminus_regularized(grid, eps0, m);
  const DiscretizedOperator p2 = pminus_regularized(grid, eps0 / 2.0, m);
  const DiscretizedOperator p4 = pminus_regularized(grid, eps0 / 4.0, m);
  // Second-order Richardson: removes the O(eps) and O(eps^2) terms.
  DiscretizedOperator r{grid, (p1.matrix - 6.0 * p2.matrix + 8.0 * p4.matrix) / 3.0};
  r.approximate = true;
  return r;
}

double grid_lambda(const VectorPotential& A, const SurfaceGrid& grid, std::size_t i, std::size_t j) {
  return lambda_from_values(A.value(grid.points[i]), A.value(grid.points[j]), -grid.displacement(i, j));
}

DiscretizedOperator delta_p_lambda(GridPtr grid, const std::function<double(std::size_t, std::size_t)>& lambda,
                                   double m) {
  const SurfaceGrid& g = *grid;
  const std::size_t n = g.size();
  DiscretizedOperator op{grid, Matrix::Zero(g.dim(), g.dim())};
  std::vector<SpinorMatrix> right(n);
  for (std::size_t j = 0; j < n; ++j) right[j] = g.Gamma[j] * g.weights[j];
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double lam = lambda(i, j);
      if (lam == 0.0) continue;
      const SpinorMatrix k = (std::exp(cd(0.0, -lam)) - 1.0) * p_minus(complexify(g.displacement(i, j), 0.0, default_u()), m);
      op.matrix.block<4, 4>(4 * i, 4 * j) = k * right[j];
    }
  });
  return op;
}

DiscretizedOperator delta_p(GridPtr grid, const VectorPotential& A, double m) {
  const SurfaceGrid& g = *grid;
  const std::size_t n = g.size();
  const std::vector<FourVector> Av = node_potentials(A, g);
  std::vector<char> act(n);
  for (std::size_t i = 0; i < n; ++i) act[i] = Av[i].squaredNorm() > 0.0;
  DiscretizedOperator op{grid, Matrix::Zero(g.dim(), g.dim())};
  std::vector<SpinorMatrix> right(n);
  for (std::size_t j = 0; j < n; ++j) right[j] = g.Gamma[j] * g.weights[j];
  // Each unordered pair is evaluated once: at eps = 0 the kernel at -z follows
  // from the same D evaluation, and lambda is antisymmetric.
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!act[i] && !act[j]) continue;
      const FourVector z = g.displacement(i, j);
      const double lam = lambda_from_values(Av[i], Av[j], -z);
      if (lam == 0.0) continue;
      const DEval d = d_eval(complexify(z, 0.0, default_u()), m);
      const cd phase = std::exp(cd(0.0, -lam)) - 1.0;
      op.matrix.block<4, 4>(4 * i, 4 * j) = phase * p_minus(d, m) * right[j];
      op.matrix.block<4, 4>(4 * j, 4 * i) = std::conj(phase) * p_minus_reflected(d, m) * right[i];
    }
  });
  return op;
}

DiscretizedOperator p_lambda(GridPtr grid, const VectorPotential& A, double m, const PLambdaOptions& opt) {
  const bool flat_periodic = grid->periodic && grid->surface->is_flat();
  DiscretizedOperator pm =
      flat_periodic ? pminus_flat_oracle(grid, m) : pminus_extrapolated(grid, opt.extrapolation_eps0, m);
  DiscretizedOperator dp = flat_periodic ? delta_p_lattice(grid, A, m) : delta_p(grid, A, m);
  DiscretizedOperator r{grid, std::move(pm.matrix)};
  r.matrix += dp.matrix;
  r.approximate = pm.approximate;
  return r;
}

DiscretizedOperator q_commutator(const DiscretizedOperator& P_A, const DiscretizedOperator& P_minus) {
  require_same_grid(P_A, P_minus, "q_commutator");
  DiscretizedOperator q{P_A.grid, P_A.matrix * P_minus.matrix};
  q.matrix.noalias() -= P_minus.matrix * P_A.matrix;
  q.approximate = P_A.approximate || P_minus.approximate;
  return q;
}

DiscretizedOperator exp_unitary(const DiscretizedOperator& Q, double tol) {
  const Matrix N = normalized(Q);
  const double skew = N.size() ? linalg::hermitian_norm(N + N.adjoint()) : 0.0;
  if (skew > tol) {
    std::ostringstream os;
    os << "exp_unitary: skew-adjoint defect " << skew << " exceeds " << tol;
    throw NotSkewAdjoint(os.str());
  }
  // Q = -i H with H = i Q self-adjoint; e^Q = V e^{-i Lambda} V^dagger.
  Matrix H = I * N;
  H = (0.5 * (H + H.adjoint())).eval();
  Matrix V;
  const Eigen::VectorXd ev = linalg::hermitian_eigen(H, &V);
  Eigen::VectorXcd ph(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) ph[k] = std::exp(cd(0.0, -ev[k]));
  const Matrix E = V * ph.asDiagonal() * V.adjoint();
  DiscretizedOperator r{Q.grid, denormalized(*Q.grid, E)};
  r.approximate = Q.approximate;
  return r;
}

RepresentativeResult representative_projector(const DiscretizedOperator& P_minus, const DiscretizedOperator& Q,
                                              const DiscretizedOperator& P_A) {
  require_same_grid(P_minus, Q, "representative_projector");
  require_same_grid(P_minus, P_A, "representative_projector");
  const DiscretizedOperator E = exp_unitary(Q);
  const Matrix En = normalized(E);
  const Matrix Pn = normalized(P_minus);
  const Matrix Pin = En * Pn * En.adjoint();
  RepresentativeResult r{DiscretizedOperator{P_minus.grid, denormalized(*P_minus.grid, Pin)}, {}, 0.0};
  r.Pi.approximate = P_minus.approximate || Q.approximate;
  const Matrix diff = Pin - normalized(P_A);
  r.report.hs_norm = diff.norm();
  const Eigen::VectorXd s = linalg::svd(diff);
  r.report.op_norm = s.size() ? s[0] : 0.0;
  r.report.top_singular_values.assign(s.data(), s.data() + std::min<Eigen::Index>(10, s.size()));
  r.report.projector_defect = linalg::spectral_norm(Pin * Pin - Pin);
  r.projector_defect_pminus = linalg::spectral_norm(Pn * Pn - Pn);
  return r;
}

// ---------------------------------------------------------------------------

FlatSpectralBasis::FlatSpectralBasis(GridPtr grid, double m, LatticeSymbol symbol)
    : grid_(std::move(grid)), m_(m), symbol_(symbol) {
  const SurfaceGrid& g = *grid_;
  if (!g.surface->is_flat() || !g.periodic || g.rule != QuadratureRule::Midpoint)
    throw ConfigError("FlatSpectralBasis: requires a flat periodic midpoint grid");
  const int N = g.N;
  modes_ = g.size();
  const double dp = 2.0 * std::numbers::pi / (2.0 * g.L);
  auto wrap = [N](int k) { return k < (N + 1) / 2 ? k : k - N; };
  for (std::size_t k = 0; k < modes_; ++k) {
    const NodeIndex o = node_index(k, N);
    const Vec3 p(dp * wrap(o.a), dp * wrap(o.b), dp * wrap(o.c));
    momenta_.push_back(p);
    const SpinorMatrix L = negative_energy_symbol(lattice_momentum(p, g.spacing(), symbol_), m_);
    Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(0.5 * (L + L.adjoint()));
    rot_.push_back(es.eigenvectors());  // eigenvalues ascending: (0, 0, 1, 1)
  }
}

void FlatSpectralBasis::dft_columns(Matrix& M, bool inverse) const {
  const SurfaceGrid& g = *grid_;
  const int N = g.N;
  const Eigen::MatrixXcd F = dft_axis_matrix(g, inverse);
  const Eigen::Index cols = M.cols();
  parallel_for(static_cast<std::size_t>(cols), [&](std::size_t col) {
    // Column viewed as an array [a][b][c][s]; transform each spatial axis in turn.
    cd* v = M.col(static_cast<Eigen::Index>(col)).data();
    std::vector<cd> line(N), out(N);
    const int strides[3] = {N * N * 4, N * 4, 4};
    for (int axis = 0; axis < 3; ++axis) {
      const int st = strides[axis];
      for (int base = 0; base < N * N * N * 4; ++base) {
        // base enumerates offsets with zero index along this axis
        const int idx_along = (base / st) % N;
        if (idx_along != 0) continue;
        for (int a = 0; a < N; ++a) line[a] = v[base + a * st];
        for (int k = 0; k < N; ++k) {
          cd s = 0.0;
          for (int a = 0; a < N; ++a) s += F(k, a) * line[a];
          out[k] = s;
        }
        for (int k = 0; k < N; ++k) v[base + k * st] = out[k];
      }
    }
  });
}

Matrix FlatSpectralBasis::to_spectral(Matrix X) const {
  // X <- F^dagger M F, then per-mode rotation R_k^dagger X_kl R_l, then reorder.
  dft_columns(X, false);
  X.adjointInPlace();
  dft_columns(X, false);
  X.adjointInPlace();
  const std::size_t n = modes_;
  parallel_for(n, [&](std::size_t l) {
    for (std::size_t k = 0; k < n; ++k)
      X.block<4, 4>(4 * k, 4 * l) = rot_[k].adjoint() * X.block<4, 4>(4 * k, 4 * l) * rot_[l];
  });
  Eigen::PermutationMatrix<Eigen::Dynamic> P(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < n; ++k)
    for (int a = 0; a < 4; ++a) P.indices()[static_cast<Eigen::Index>(4 * k + a)] = static_cast<int>(index(k, a));
  X = P * X;
  X = X * P.transpose();
  return X;
}

SpinorMatrix FlatSpectralBasis::mode_projector(std::size_t k) const {
  return rot_[k].adjoint() * negative_energy_symbol(lattice_momentum(momenta_[k], grid_->spacing(), symbol_), m_) *
         rot_[k];
}

Matrix FlatSpectralBasis::projector_in_basis() const {
  Matrix P = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < modes_; ++k) {
    const SpinorMatrix blk = mode_projector(k);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        P(static_cast<Eigen::Index>(index(k, a)), static_cast<Eigen::Index>(index(k, b))) = blk(a, b);
  }
  return P;
}

PeriodicBlocks periodic_blocks(const DiscretizedOperator& op, double m) {
  FlatSpectralBasis basis(op.grid, m);
  const Matrix S = basis.to_spectral(normalized(op));
  const std::size_t modes = basis.modes();
  std::vector<int> mode_of(basis.dim());
  for (std::size_t k = 0; k < modes; ++k)
    for (int a = 0; a < 4; ++a) mode_of[basis.index(k, a)] = static_cast<int>(k);
  PeriodicBlocks out;
  out.blocks.resize(modes);
  for (std::size_t k = 0; k < modes; ++k)
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c)
        out.blocks[k](a, c) =
            S(static_cast<Eigen::Index>(basis.index(k, a)), static_cast<Eigen::Index>(basis.index(k, c)));
  double off = 0.0;
  for (Eigen::Index c = 0; c < S.cols(); ++c)
    for (Eigen::Index r = 0; r < S.rows(); ++r)
      if (mode_of[static_cast<std::size_t>(r)] != mode_of[static_cast<std::size_t>(c)]) off += std::norm(S(r, c));
  out.off_block = std::sqrt(off);
  return out;
}

double periodic_op_norm(const DiscretizedOperator& op, double m, double* off_block) {
  const PeriodicBlocks pb = periodic_blocks(op, m);
  double best = 0.0;
  for (const auto& b : pb.blocks) best = std::max(best, Eigen::JacobiSVD<SpinorMatrix>(b).singularValues()[0]);
  if (off_block) *off_block = pb.off_block;
  return best;
}

double periodic_projector_defect(const DiscretizedOperator& op, double m, double* off_block) {
  const PeriodicBlocks pb = periodic_blocks(op, m);
  double best = 0.0;
  for (const auto& b : pb.blocks)
    best = std::max(best, Eigen::JacobiSVD<SpinorMatrix>(b * b - b).singularValues()[0]);
  if (off_block) *off_block = pb.off_block;
  return best;
}

double periodic_self_adjoint_defect(const DiscretizedOperator& op, double m, double* off_block) {
  const PeriodicBlocks pb = periodic_blocks(op, m);
  double best = 0.0;
  for (const auto& b : pb.blocks)
    best = std::max(best, Eigen::JacobiSVD<SpinorMatrix>(b - b.adjoint()).singularValues()[0]);
  if (off_block) *off_block = pb.off_block;
  return best;
}

BlockRepresentativeReport representative_experiment(GridPtr grid, const VectorPotential& A, double m,
                                                    bool with_defects, LatticeSymbol symbol) {
  const SurfaceGrid& g = *grid;
  FlatSpectralBasis basis(grid, m, symbol);
  BlockRepresentativeReport rep;
  rep.N = g.N;
  rep.h = g.spacing();

  Matrix W;
  {
    DiscretizedOperator dp = delta_p_lattice(grid, A, m, symbol);
    rep.hs_pa_minus_pminus = hs_norm(dp);
    W = basis.to_spectral(std::move(dp.matrix));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(basis.half());
  const std::size_t modes = basis.modes();
  std::vector<SpinorMatrix> pm(modes);
  std::vector<std::array<Eigen::Index, 4>> idx(modes);
  std::vector<std::size_t> mode_of(2 * static_cast<std::size_t>(n));
  std::vector<int> dir_of(2 * static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < modes; ++k) {
    pm[k] = basis.mode_projector(k);
    const SpinorMatrix d = pm[k] * pm[k] - pm[k];
    rep.oracle_projector_defect = std::max(rep.oracle_projector_defect, linalg::hermitian_norm(0.5 * (d + d.adjoint())));
    for (int a = 0; a < 4; ++a) {
      idx[k][a] = static_cast<Eigen::Index>(basis.index(k, a));
      mode_of[basis.index(k, a)] = k;
      dir_of[basis.index(k, a)] = a;
    }
  }

  // Q = W Pm - Pm W.  Pm is block diagonal over modes, so each entry needs
  // four products from each side.
  Matrix Q(2 * n, 2 * n);
  parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t cc) {
    const Eigen::Index c = static_cast<Eigen::Index>(cc);
    const std::size_t kc = mode_of[cc];
    const int bc = dir_of[cc];
    for (Eigen::Index r = 0; r < 2 * n; ++r) {
      const std::size_t kr = mode_of[static_cast<std::size_t>(r)];
      const int ar = dir_of[static_cast<std::size_t>(r)];
      cd v = 0.0;
      for (int t = 0; t < 4; ++t) v += W(r, idx[kc][t]) * pm[kc](t, bc) - pm[kr](ar, t) * W(idx[kr][t], c);
      Q(r, c) = v;
    }
  });
  {
    double skew2 = 0.0;
    for (Eigen::Index c = 0; c < 2 * n; ++c)
      for (Eigen::Index r = 0; r < 2 * n; ++r) skew2 += std::norm(Q(r, c) + std::conj(Q(c, r)));
    rep.q_skew_defect = std::sqrt(skew2);
    rep.q_diagonal_block_defect = Q.topLeftCorner(n, n).norm() + Q.bottomRightCorner(n, n).norm();
  }

  // Q = [[0, B], [-B^dagger, 0]] with B = W_{+-}.
  Matrix B = Q.topRightCorner(n, n);
  Q.resize(0, 0);
  Matrix U, V;
  const Eigen::VectorXd s = linalg::svd(B, &U, &V);
  rep.q_op_norm = s.size() ? s[0] : 0.0;
  Eigen::VectorXd sn(s.size()), cs(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    sn[k] = std::sin(s[k]);
    cs[k] = std::cos(s[k]);
  }
  const Matrix Us = U * sn.asDiagonal();
  const Matrix Vs = V * sn.asDiagonal();
  // Pi - P_A blocks:
  //   ++ : U sin^2 U^dagger - W_{++}
  //   +- : U sin cos V^dagger - W_{+-}
  //   -+ : V sin cos U^dagger - W_{-+}
  //   -- : -V sin^2 V^dagger - W_{--}
  Matrix X = Us * Us.adjoint() - W.topLeftCorner(n, n);
  double hs2 = X.squaredNorm();
  X = Us * (V * cs.asDiagonal()).adjoint() - W.topRightCorner(n, n);
  hs2 += X.squaredNorm();
  X = (V * cs.asDiagonal()) * Us.adjoint() - W.bottomLeftCorner(n, n);
  hs2 += X.squaredNorm();
  X = -Vs * Vs.adjoint() - W.bottomRightCorner(n, n);
  hs2 += X.squaredNorm();
  rep.hs_pi_minus_pa = std::sqrt(hs2);

  if (with_defects) {
    const Matrix Uc = U * cs.asDiagonal();
    const Matrix Vc = V * cs.asDiagonal();
    Matrix E(2 * n, 2 * n);
    E.topLeftCorner(n, n) = Uc * U.adjoint();
    E.topRightCorner(n, n) = Us * V.adjoint();
    E.bottomLeftCorner(n, n) = -Vs * U.adjoint();
    E.bottomRightCorner(n, n) = Vc * V.adjoint();
    Matrix EE = E * E.adjoint();
    EE -= Matrix::Identity(2 * n, 2 * n);
    rep.unitarity_defect = linalg::hermitian_norm(0.5 * (EE + EE.adjoint()));
    EE.resize(0, 0);
    Matrix Pi = E * basis.projector_in_basis() * E.adjoint();
    Matrix D2 = Pi * Pi - Pi;
    rep.pi_projector_defect = linalg::hermitian_norm(0.5 * (D2 + D2.adjoint()));
  }
  return rep;
}

// ---------------------------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("loglog_slope: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0) || !std::isfinite(x[k]) || !std::isfinite(y[k]))
      throw FitError("loglog_slope: samples must be positive and finite");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-14 * std::max(1.0, n * sxx)) throw FitError("loglog_slope: abscissae are degenerate");
  return (n * sxy - sx * sy) / den;
}

DichotomyTable tangential_dichotomy_experiment(const VectorPotential& A, const VectorPotential& B, SurfacePtr surface,
                                              double L, const std::vector<int>& Ns, double m, QuadratureRule rule) {
  DichotomyTable table;
  std::vector<SupportBall> supports = A.support();
  for (const auto& s : B.support()) supports.push_back(s);
  bool identical = true;
  for (int N : Ns) {
    GridPtr grid = make_grid(surface, L, N, rule, false, supports, 0.0);
    const SurfaceGrid& g = *grid;
    const std::size_t n = g.size();
    const std::vector<FourVector> Av = node_potentials(A, g), Bv = node_potentials(B, g);
    std::vector<char> act(n);
    std::vector<SpinorMatrix> Lw(n), Rw(n);
    for (std::size_t i = 0; i < n; ++i) {
      act[i] = Av[i].squaredNorm() > 0.0 || Bv[i].squaredNorm() > 0.0;
      Lw[i] = gamma(0) * g.Gamma[i];
      Rw[i] = g.Gamma[i] * gamma(0);
    }
    std::vector<double> partial(n, 0.0);
    std::vector<char> nonzero(n, 0);
    parallel_for(n, [&](std::size_t i) {
      double s = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!act[i] && !act[j]) continue;
        const FourVector z = g.displacement(i, j);
        const double la = lambda_from_values(Av[i], Av[j], -z);
        const double lb = lambda_from_values(Bv[i], Bv[j], -z);
        if (la == lb) continue;
        const cd c = std::exp(cd(0.0, -la)) - std::exp(cd(0.0, -lb));
        if (c == 0.0) continue;
        nonzero[i] = 1;
        const DEval d = d_eval(complexify(z, 0.0, default_u()), m);
        const double w = g.weights[i] * g.weights[j];
        s += w * trace_weight(c, p_minus(d, m), Lw[i], Rw[j]);
        s += w * trace_weight(std::conj(c), p_minus_reflected(d, m), Lw[j], Rw[i]);
      }
      partial[i] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    for (char c : nonzero) identical = identical && !c;
    table.rows.push_back({N, g.spacing(), std::sqrt(std::max(total, 0.0))});
    if (N == Ns.back()) table.tangential_difference = tangential_difference(A, B, g);
  }
  table.identical = identical;
  if (!identical && table.rows.size() >= 2) {
    std::vector<double> h, hs2;
    for (const auto& r : table.rows) {
      h.push_back(r.h);
      hs2.push_back(r.hs_norm * r.hs_norm);
    }
    table.alpha = -loglog_slope(h, hs2);
    table.growth_factor = std::pow(2.0, table.alpha);
  }
  return table;
}

}  // namespace qedcs
