#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gibbslab/lattice.hpp"
#include "gibbslab/types.hpp"

namespace gibbslab {

// Dense operator living on the tensor factors of its support region.  Sites
// are ordered ascending, the lowest site index being the leftmost (most
// significant) Kronecker factor.
struct ChainOp {
  Region support;
  Matrix mat;

  std::int64_t dim() const { return mat.rows(); }
};

ChainOp identity_op(const Region& support, int local_dim);

// max-entry deviation of M - M^dagger, relative to the largest entry of M.
double hermiticity_defect(const Matrix& m);

ChainOp make_hermitian(Region support, Matrix m, int local_dim, double tol_herm = 1e-12);

// Validates PSD (eigenvalues >= -tol_psd) and unit trace; returns the state.
ChainOp make_density(Region support, Matrix m, int local_dim, double tol_psd = 1e-10,
                     double tol_tr = 1e-10);

// Index contribution table: for `sub` inside `whole` (both sorted), entry i is
// the whole-space row index carried by sub-digit pattern i.  A full index is
// the sum of the contributions of complementary sub-patterns.
std::vector<std::int64_t> index_contributions(const Region& sub, const Region& whole,
                                              int local_dim);

// op (x) identity on target \ support, with site interleaving respected.
ChainOp embed(const ChainOp& op, const Region& target, int local_dim);
ChainOp embed(const ChainOp& op, const Lattice& lat);

// tr_traced[op], supported on op.support \ traced.  Preserves the full trace.
ChainOp partial_trace(const ChainOp& op, const Region& traced, int local_dim);

// tr_traced[op] (x) 1_traced, back on the original support (the paper's
// "modified partial trace").
ChainOp mod_partial_trace(const ChainOp& op, const Region& traced, int local_dim);

// Product of operators on disjoint supports = tensor product on the union.
ChainOp tensor(const ChainOp& a, const ChainOp& b, int local_dim);

// Relabel sites via site_map (a bijection on site indices).  The result is
// supported on the image region with matrix conjugated by the induced
// basis permutation.
ChainOp permute_sites(const ChainOp& op, const std::function<int(int)>& site_map, int local_dim);

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns
};

// Hermitian eigendecomposition; throws if the reconstruction misses by more
// than tol_eig * ||M||_inf.
SpectralDecomposition spectral(const Matrix& m, double tol_eig = 1e-10);

enum class MatrixFn { Log, Sqrt, InvSqrt, Exp, Inverse };

struct MatrixFnResult {
  ChainOp op;
  bool clamped = false;  // eigenvalues below eps_floor were clamped
};

// U f(diag lambda) U^dagger through the Hermitian eigendecomposition.  For
// log / inv_sqrt / inverse a singular input throws unless clamping is on.
MatrixFnResult matrix_function(const ChainOp& m, MatrixFn fn, bool clamp = false,
                               double eps_floor = kEpsFloor);

struct Norms {
  double operator_norm = 0;  // max |eigenvalue| (Hermitian input)
  double trace_norm = 0;     // sum |eigenvalues|
};

Norms norms(const ChainOp& op);

double trace_distance(const ChainOp& a, const ChainOp& b);

// Linear map on operators of a fixed dimension, usable both functionally and
// (under the cap) as a dense matrix on the column-stacked space.
struct Superoperator {
  std::int64_t domain_dim = 0;
  std::function<Matrix(const Matrix&)> apply;
};

Vector vec(const Matrix& m);                         // column stacking
Matrix unvec(const Vector& v, std::int64_t dim);

// Dense matrix L with L vec(rho) = vec(S(rho)); requires D^2 <= dense_cap.
Matrix vectorize(const Superoperator& s, std::int64_t dense_cap = kDefaultDenseCap);

struct SuperoperatorCheck {
  double linearity_residual = 0;  // on random pairs and scalars
  double dense_residual = 0;      // dense action vs apply, when dense given
  bool pass = false;
};

SuperoperatorCheck verify_superoperator(const Superoperator& s, const Matrix* dense,
                                        int n_samples, std::uint64_t seed, double tol = 1e-10);

// Text serialization for report attachments: support sites, dimension header,
// then row-major "re im" pairs.
void save_operator(const ChainOp& op, const std::string& path);
ChainOp load_operator(const std::string& path);

}  // namespace gibbslab
