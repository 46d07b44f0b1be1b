#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qedcs/field.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/linalg.hpp"
#include "qedcs/surface.hpp"

namespace qedcs {

// Integral operator on a surface grid.  Block (i, j) of `matrix` equals
// k(x_i, x_j) Gamma_j w_j, so that (K psi)_i = sum_j k(x_i, x_j) Gamma_j w_j psi_j.
struct DiscretizedOperator {
  GridPtr grid;
  linalg::Matrix matrix;
  conventions::WeightConvention weight_convention = conventions::kWeightConvention;
  // Set when the operator is only an extrapolated approximation (curved-surface P^-).
  bool approximate = false;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

enum class DiagonalRule {
  Exclude,  // diagonal blocks are zero (kernels singular at z = 0)
  Limit,    // the kernel is evaluated at i == j (regularized kernels)
};

// k(x_i, x_j) as a function of node indices.
using KernelFn = std::function<SpinorMatrix(std::size_t i, std::size_t j)>;

// Nystrom assembly.  DomainError from the kernel is rethrown with the node indices.
DiscretizedOperator assemble(const KernelFn& kernel, GridPtr grid, DiagonalRule rule);

// The grid's Hilbert space carries the Gram matrix G = diag(w_i gamma^0 Gamma_i).
// normalized(op) = G^{1/2} M G^{-1/2} is the unitarily equivalent matrix in an
// orthonormal basis: adjoints become conjugate transposes there.
linalg::Matrix normalized(const DiscretizedOperator& op);
// Inverse of `normalized`.
linalg::Matrix denormalized(const SurfaceGrid& grid, const linalg::Matrix& n);

// sqrt( sum_ij w_i w_j trace[gamma^0 k_ij^dagger gamma^0 Gamma_i k_ij Gamma_j] ), equal
// to the Frobenius norm of normalized(op).
double hs_norm(const DiscretizedOperator& op);
// The same quantity streamed from a kernel without storing a matrix.  `active`
// (if set) restricts to pairs whose kernel may be non-zero; the diagonal is excluded.
double hs_norm_kernel(const KernelFn& kernel, const SurfaceGrid& grid,
                      const std::function<bool(std::size_t, std::size_t)>& active = {});

double op_norm(const DiscretizedOperator& op);
// Singular values of normalized(op), descending; `count` <= 0 keeps all.
std::vector<double> singular_values(const DiscretizedOperator& op, int count = 0);
// Operator norm of P^2 - P.
double projector_defect(const DiscretizedOperator& op);
// Operator norm of A - A^dagger in the grid's Hilbert space.
double self_adjoint_defect(const DiscretizedOperator& op);
// Operator norm of A + A^dagger.
double skew_adjoint_defect(const DiscretizedOperator& op);

struct HSReport {
  double hs_norm = 0.0;
  double op_norm = 0.0;
  std::vector<double> top_singular_values;
  double projector_defect = 0.0;
};

HSReport hs_report(const DiscretizedOperator& op, int top = 10, bool with_projector_defect = true);

DiscretizedOperator operator+(const DiscretizedOperator& a, const DiscretizedOperator& b);
DiscretizedOperator operator-(const DiscretizedOperator& a, const DiscretizedOperator& b);
DiscretizedOperator operator*(const DiscretizedOperator& a, const DiscretizedOperator& b);

// Momentum fed to Lambda_- for a lattice mode p on a grid of spacing h.
//   Exact: p itself; the projector reproduces p^- on low modes but its symbol
//          jumps across the Brillouin-zone edge, which gives slowly decaying tails.
//   Naive: sin(p_k h) / h per axis; a smooth periodic symbol with exponentially
//          decaying kernel (the naive lattice Dirac Hamiltonian).
enum class LatticeSymbol { Exact, Naive };
Vec3 lattice_momentum(const Vec3& p, double h, LatticeSymbol symbol);

// Negative-energy projector on a flat periodic midpoint grid by discrete Fourier
// conjugation of Lambda_-(p) = (1 - (alpha.p + beta m) / E(p)) / 2.
DiscretizedOperator pminus_flat_oracle(GridPtr grid, double m, LatticeSymbol symbol = LatticeSymbol::Exact);

// Lambda_-(p) for a spatial momentum.
SpinorMatrix negative_energy_symbol(const Vec3& p, double m);

// The regularized kernel p^-(y - x + i eps u) assembled with the diagonal included.
DiscretizedOperator pminus_regularized(GridPtr grid, double eps, double m, const FourVector& u = default_u());

// P^- on a curved surface by Richardson extrapolation of the regularized
// assembly at eps0, eps0/2, eps0/4 to eps = 0.  Marked approximate.
DiscretizedOperator pminus_extrapolated(GridPtr grid, double eps0, double m);

// Kernel (e^{-i lambda(x,y)} - 1) p^-(y - x) at eps = 0, with lambda a function
// of node indices; pairs with lambda == 0 are skipped.
DiscretizedOperator delta_p_lambda(GridPtr grid, const std::function<double(std::size_t, std::size_t)>& lambda,
                                   double m);
// lambda^A(x_i, x_j) on the grid (periodic grids use the minimum-image difference).
double grid_lambda(const VectorPotential& A, const SurfaceGrid& grid, std::size_t i, std::size_t j);
DiscretizedOperator delta_p(GridPtr grid, const VectorPotential& A, double m);
// Flat periodic grids: the phase (e^{-i lambda^A} - 1) applied blockwise to the
// spectral projector, so that the first-order part of P_A - P^- is a commutator
// with the discrete P^-.
DiscretizedOperator delta_p_lattice(GridPtr grid, const VectorPotential& A, double m,
                                    LatticeSymbol symbol = LatticeSymbol::Exact);

struct PLambdaOptions {
  double extrapolation_eps0 = 0.4;  // used only on curved surfaces
};

// P^- + Delta P^{lambda^A}.  Flat periodic grids use the spectral oracle for P^-
// and delta_p_lattice.
DiscretizedOperator p_lambda(GridPtr grid, const VectorPotential& A, double m, const PLambdaOptions& opt = {});

// Q = [P_A, P_minus].  Throws GridMismatch when the grids differ.
DiscretizedOperator q_commutator(const DiscretizedOperator& P_A, const DiscretizedOperator& P_minus);

// e^Q from the eigendecomposition of the self-adjoint i Q (in the normalized
// representation).  Throws NotSkewAdjoint when the skew defect exceeds tol.
DiscretizedOperator exp_unitary(const DiscretizedOperator& Q, double tol = 1e-8);

struct RepresentativeResult {
  DiscretizedOperator Pi;
  HSReport report;               // report.hs_norm is hs_norm(Pi - P_A)
  double projector_defect_pminus = 0.0;
};

// Pi = e^Q P^- e^{-Q}; the report carries hs_norm(Pi - P_A) and the projector defect of Pi.
RepresentativeResult representative_projector(const DiscretizedOperator& P_minus, const DiscretizedOperator& Q,
                                              const DiscretizedOperator& P_A);

// ---------------------------------------------------------------------------
// Flat periodic grids: the H+ (+) H- splitting.

// Orthonormal basis of plane waves times eigenvectors of Lambda_-(p): columns
// ordered with all H+ vectors first (2 per mode), then all H- vectors.
class FlatSpectralBasis {
public:
  FlatSpectralBasis(GridPtr grid, double m, LatticeSymbol symbol = LatticeSymbol::Exact);
  std::size_t dim() const { return 4 * modes_; }
  std::size_t half() const { return 2 * modes_; }
  std::size_t modes() const { return modes_; }
  // B^dagger M B for a matrix acting on grid spinors (normalized representation).
  linalg::Matrix to_spectral(linalg::Matrix M) const;
  // Position of spinor direction a (0, 1: H+; 2, 3: H-) of mode k in the spectral ordering.
  std::size_t index(std::size_t k, int a) const { return a < 2 ? 2 * k + a : 2 * modes_ + 2 * k + (a - 2); }
  // The oracle symbol Lambda_-(p_k) in the rotated basis of mode k (numerically diag(0, 0, 1, 1)).
  SpinorMatrix mode_projector(std::size_t k) const;
  // Dense form of the negative-energy projector in the spectral basis.
  linalg::Matrix projector_in_basis() const;
  const SurfaceGrid& grid() const { return *grid_; }

private:
  void dft_columns(linalg::Matrix& M, bool inverse) const;

  GridPtr grid_;
  double m_;
  LatticeSymbol symbol_;
  std::size_t modes_;
  std::vector<Vec3> momenta_;
  std::vector<Eigen::Matrix4cd> rot_;  // per mode: columns = (+, +, -, -) eigenvectors
};

// Operator norm of a translation-invariant operator on a flat periodic grid,
// as the largest singular value over the per-mode 4x4 blocks in the spectral
// basis.  `off_block` receives the Frobenius norm of all inter-mode entries,
// which vanishes for an exactly circulant matrix.
double periodic_op_norm(const DiscretizedOperator& op, double m, double* off_block = nullptr);

// The per-mode 4x4 blocks of a translation-invariant operator in the spectral
// basis and the Frobenius norm of everything outside them.
struct PeriodicBlocks {
  std::vector<SpinorMatrix> blocks;
  double off_block = 0.0;
};
PeriodicBlocks periodic_blocks(const DiscretizedOperator& op, double m);
// ||P^2 - P|| and ||A - A^dagger|| from the per-mode blocks; exact for
// circulant operators, where `off_block` vanishes.
double periodic_projector_defect(const DiscretizedOperator& op, double m, double* off_block = nullptr);
double periodic_self_adjoint_defect(const DiscretizedOperator& op, double m, double* off_block = nullptr);

// Diagnostics of the representative polarization computed in the H+ (+) H- basis.
struct BlockRepresentativeReport {
  int N = 0;
  double h = 0.0;
  double q_skew_defect = 0.0;          // ||Q + Q^dagger||_F (bounds the operator norm)
  double q_diagonal_block_defect = 0.0;  // ||Q_{++}||_F + ||Q_{--}||_F
  double unitarity_defect = -1.0;      // ||e^Q e^Q^dagger - 1||_2, -1 when not computed
  double pi_projector_defect = -1.0;   // ||Pi^2 - Pi||_2, -1 when not computed
  double oracle_projector_defect = 0.0;
  double hs_pi_minus_pa = 0.0;
  double hs_pa_minus_pminus = 0.0;
  double q_op_norm = 0.0;
};

// Assemble Delta P^{lambda^A} on a flat periodic grid, move to the spectral basis
// and build e^Q, Pi and Pi - P_A blockwise from an SVD of Q_{+-}.  Dense defect
// checks (unitarity, Pi^2 - Pi) are run when `with_defects` is set.
BlockRepresentativeReport representative_experiment(GridPtr grid, const VectorPotential& A, double m,
                                                    bool with_defects, LatticeSymbol symbol = LatticeSymbol::Naive);

// ---------------------------------------------------------------------------
// Tangential dichotomy.

struct DichotomyRow {
  int N = 0;
  double h = 0.0;
  double hs_norm = 0.0;
};

struct DichotomyTable {
  std::vector<DichotomyRow> rows;
  // hs_norm^2 ~ C h^{-alpha}; growth factor per halving of h is 2^alpha.
  double alpha = 0.0;
  double growth_factor = 1.0;
  double tangential_difference = 0.0;
  bool identical = false;  // B == A on every sampled node pair
};

// hs_norm(Delta P^{lambda^A} - Delta P^{lambda^B}) on grids with the given N values
// (fixed L), streamed over pairs with a point in the field supports.
DichotomyTable tangential_dichotomy_experiment(const VectorPotential& A, const VectorPotential& B, SurfacePtr surface,
                                              double L, const std::vector<int>& Ns, double m,
                                              QuadratureRule rule = QuadratureRule::Midpoint);

// Least-squares slope of log y against log x.  Throws FitError on degenerate data.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qedcs
