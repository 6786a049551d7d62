#include "gibbslab/gibbs.hpp"

#include <cmath>
#include <random>

#include "gibbslab/entropy.hpp"

namespace gibbslab {

namespace {

Region term_window(const Lattice& lat, int center, int k) {
  int lo = std::max(0, center - (k - 1));
  int hi = std::min(lat.n_sites - 1, center + (k - 1));
  return Region::interval(lo, hi);
}

Matrix pauli_z() { return Eigen::Vector2cd(1, -1).asDiagonal(); }

}  // namespace

LocalPotential make_potential(const Lattice& lat, int k, std::vector<PotentialTerm> terms) {
  if (k < 1) throw Error("make_potential: k must be >= 1");
  LocalPotential pot{lat, k, 0.0, std::move(terms)};
  for (const auto& t : pot.terms) {
    if (t.center < 0 || t.center >= lat.n_sites) throw Error("make_potential: center off chain");
    Region window = term_window(lat, t.center, k);
    if (!window.contains(t.op.support))
      throw Error("make_potential: term at " + std::to_string(t.center) +
                  " escapes its radius-k window");
    if (hermiticity_defect(t.op.mat) > 1e-12)
      throw Error("make_potential: non-Hermitian term at " + std::to_string(t.center));
    pot.bound = std::max(pot.bound, norms(t.op).operator_norm);
  }
  return pot;
}

LocalPotential preset_ising_zz(const Lattice& lat, double coupling, double field) {
  std::vector<PotentialTerm> terms;
  Matrix zz(4, 4);
  zz = Eigen::Vector4cd(1, -1, -1, 1).asDiagonal();
  for (int x = 0; x < lat.n_sites; ++x) {
    Matrix m;
    Region supp;
    if (x + 1 < lat.n_sites) {
      supp = Region::interval(x, x + 1);
      m = coupling * zz + field * tensor(ChainOp{Region({x}), pauli_z()},
                                         identity_op(Region({x + 1}), 2), 2)
                                      .mat;
    } else {
      supp = Region({x});
      m = field * pauli_z();
    }
    terms.push_back({x, ChainOp{supp, m}});
  }
  return make_potential(lat, 2, std::move(terms));
}

LocalPotential preset_classical_random_field(const Lattice& lat, std::uint64_t seed,
                                             double j_scale, double h_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uj(0.4, 1.0), uh(-1.0, 1.0);
  std::vector<PotentialTerm> terms;
  for (int x = 0; x < lat.n_sites; ++x) {
    double h = h_scale * uh(rng);
    if (x + 1 < lat.n_sites) {
      double j = j_scale * uj(rng);
      Matrix m = j * Eigen::Vector4cd(1, -1, -1, 1).asDiagonal().toDenseMatrix() +
                 h * Eigen::Vector4cd(1, 1, -1, -1).asDiagonal().toDenseMatrix();
      terms.push_back({x, ChainOp{Region::interval(x, x + 1), m}});
    } else {
      terms.push_back({x, ChainOp{Region({x}), h * pauli_z()}});
    }
  }
  return make_potential(lat, 2, std::move(terms));
}

LocalPotential preset_defect_chain(const Lattice& lat, int defect_site, double defect_strength,
                                   double decay, double base) {
  if (defect_site < 0) defect_site = lat.n_sites / 2;
  if (defect_site >= lat.n_sites) throw Error("preset_defect_chain: defect site off chain");
  std::vector<PotentialTerm> terms;
  for (int x = 0; x < lat.n_sites; ++x) {
    double amp = base * std::pow(decay, std::abs(x - defect_site));
    if (x == defect_site) amp = defect_strength;
    if (x + 1 < lat.n_sites) {
      Matrix m = amp * Eigen::Vector4cd(1, -1, -1, 1).asDiagonal().toDenseMatrix();
      terms.push_back({x, ChainOp{Region::interval(x, x + 1), m}});
    } else {
      terms.push_back({x, ChainOp{Region({x}), amp * pauli_z()}});
    }
  }
  return make_potential(lat, 2, std::move(terms));
}

LocalPotential preset_xx_chain(const Lattice& lat, double coupling) {
  std::vector<PotentialTerm> terms;
  Matrix xx = Matrix::Zero(4, 4);
  xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1;  // X (x) X
  for (int x = 0; x + 1 < lat.n_sites; ++x)
    terms.push_back({x, ChainOp{Region::interval(x, x + 1), coupling * xx}});
  return make_potential(lat, 2, std::move(terms));
}

ChainOp hamiltonian(const LocalPotential& pot, const Region& region) {
  Region supp;
  for (const auto& t : pot.terms)
    if (region.contains(t.center)) supp = region_union(supp, t.op.support);
  if (supp.empty()) {
    Region fallback = region.empty() ? Region({0}) : Region({region.sites().front()});
    return ChainOp{fallback, Matrix::Zero(pot.lattice.local_dim, pot.lattice.local_dim)};
  }
  std::int64_t dim = ipow(pot.lattice.local_dim, supp.size());
  ChainOp h{supp, Matrix::Zero(dim, dim)};
  for (const auto& t : pot.terms)
    if (region.contains(t.center)) h.mat += embed(t.op, supp, pot.lattice.local_dim).mat;
  return h;
}

CommutingCheck check_commuting(const LocalPotential& pot, double tol_comm) {
  double worst = 0;
  const int d = pot.lattice.local_dim;
  for (std::size_t i = 0; i < pot.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < pot.terms.size(); ++j) {
      const auto& ti = pot.terms[i];
      const auto& tj = pot.terms[j];
      if (ti.op.support.disjoint_from(tj.op.support)) continue;
      Region u = region_union(ti.op.support, tj.op.support);
      Matrix a = embed(ti.op, u, d).mat;
      Matrix b = embed(tj.op, u, d).mat;
      Matrix comm = a * b - b * a;
      // commutator of Hermitian ops is anti-Hermitian; use singular values
      Eigen::SelfAdjointEigenSolver<Matrix> es(comm.adjoint() * comm, Eigen::EigenvaluesOnly);
      worst = std::max(worst, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
    }
  }
  return {worst, worst <= tol_comm};
}

GibbsState::GibbsState(LocalPotential pot, double beta, bool override_commuting, double tol_comm)
    : potential_(std::move(pot)), beta_(beta) {
  if (beta < 0) throw Error("GibbsState: beta must be >= 0");
  CommutingCheck cc = check_commuting(potential_, tol_comm);
  if (!cc.pass) {
    if (!override_commuting)
      throw Error("GibbsState: potential is not commuting (max norm " +
                  std::to_string(cc.max_commutator_norm) + "); pass override to proceed");
    tainted_ = true;
  }

  const Lattice& lat = potential_.lattice;
  h_full_ = embed(hamiltonian(potential_, Region::full(lat)), lat);
  SpectralDecomposition sd = spectral(h_full_.mat);

  // log Z = logsumexp(-beta lambda); sigma functions come straight from the
  // H spectrum, so log sigma needs no clamping even at large beta.
  const RealVector& lam = sd.eigenvalues;
  double m = (-beta * lam.array()).maxCoeff();
  double z = 0;
  for (int i = 0; i < lam.size(); ++i) z += std::exp(-beta * lam[i] - m);
  log_z_ = m + std::log(z);

  RealVector w(lam.size()), logw(lam.size());
  for (int i = 0; i < lam.size(); ++i) {
    logw[i] = -beta * lam[i] - log_z_;
    w[i] = std::exp(logw[i]);
  }
  sigma_ = ChainOp{Region::full(lat), sd.eigenvectors * w.asDiagonal() * sd.eigenvectors.adjoint()};
  log_sigma_ = sd.eigenvectors * logw.asDiagonal() * sd.eigenvectors.adjoint();
  RealVector half = (0.5 * logw.array()).exp();
  RealVector neg_half = (-0.5 * logw.array()).exp();
  sigma_sqrt_ = sd.eigenvectors * half.asDiagonal() * sd.eigenvectors.adjoint();
  sigma_inv_sqrt_ = sd.eigenvectors * neg_half.asDiagonal() * sd.eigenvectors.adjoint();
  min_eig_ = w.minCoeff();
}

const ChainOp& GibbsState::reduced(const Region& r) const {
  if (!Region::full(lattice()).contains(r)) throw Error("reduced: region outside chain");
  std::scoped_lock lock(mutex_);
  auto it = reduced_.find(r.sites());
  if (it != reduced_.end()) return it->second;
  Region traced = r.complement_in(lattice());
  ChainOp red = traced.empty() ? sigma_ : partial_trace(sigma_, traced, lattice().local_dim);
  return reduced_.emplace(r.sites(), std::move(red)).first->second;
}

const Matrix& GibbsState::reduced_inv_sqrt(const Region& r) const {
  {
    std::scoped_lock lock(mutex_);
    auto it = reduced_inv_sqrt_.find(r.sites());
    if (it != reduced_inv_sqrt_.end()) return it->second;
  }
  ChainOp red = reduced(r);
  MatrixFnResult f = matrix_function(red, MatrixFn::InvSqrt);
  std::scoped_lock lock(mutex_);
  return reduced_inv_sqrt_.emplace(r.sites(), std::move(f.op.mat)).first->second;
}

const Matrix& GibbsState::reduced_log(const Region& r) const {
  {
    std::scoped_lock lock(mutex_);
    auto it = reduced_log_.find(r.sites());
    if (it != reduced_log_.end()) return it->second;
  }
  ChainOp red = reduced(r);
  MatrixFnResult f = matrix_function(red, MatrixFn::Log);
  std::scoped_lock lock(mutex_);
  return reduced_log_.emplace(r.sites(), std::move(f.op.mat)).first->second;
}

std::shared_ptr<const GibbsState> gibbs_state(LocalPotential pot, double beta,
                                              bool override_commuting, double tol_comm) {
  return std::make_shared<const GibbsState>(std::move(pot), beta, override_commuting, tol_comm);
}

ChainOp reduced_state(const GibbsState& state, const Region& region) {
  return state.reduced(region);
}

ChainOp reduced_state(const ChainOp& rho, const Region& region, int local_dim) {
  Region traced = region.complement_in(rho.support);
  return traced.empty() ? rho : partial_trace(rho, traced, local_dim);
}

double cmi(const ChainOp& rho, const Region& a, const Region& b, const Region& c, int local_dim) {
  if (!a.disjoint_from(b) || !b.disjoint_from(c) || !a.disjoint_from(c))
    throw Error("cmi: regions must be disjoint");
  Region abc = region_union(region_union(a, b), c);
  if (!rho.support.contains(abc)) throw Error("cmi: regions outside support");
  ChainOp r = reduced_state(rho, abc, local_dim);
  double s_ab = von_neumann_entropy(reduced_state(r, region_union(a, b), local_dim));
  double s_bc = von_neumann_entropy(reduced_state(r, region_union(b, c), local_dim));
  double s_abc = von_neumann_entropy(r);
  double s_b = von_neumann_entropy(reduced_state(r, b, local_dim));
  return s_ab + s_bc - s_abc - s_b;
}

double qmc_log_defect(const ChainOp& sigma, const Region& a, const Region& b, const Region& c,
                      int local_dim, double eps_floor) {
  Region abc = region_union(region_union(a, b), c);
  if (abc != sigma.support) throw Error("qmc_log_defect: a,b,c must partition the support");
  auto log_of = [&](const Region& r) {
    ChainOp red = reduced_state(sigma, r, local_dim);
    Eigen::SelfAdjointEigenSolver<Matrix> es(red.mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eps_floor)
      throw Error("qmc_log_defect: rank-deficient marginal");
    MatrixFnResult f = matrix_function(red, MatrixFn::Log, false, eps_floor);
    return embed(f.op, sigma.support, local_dim).mat;
  };
  Matrix defect = log_of(abc) + log_of(b) - log_of(region_union(b, c)) - log_of(region_union(a, b));
  return norms({sigma.support, std::move(defect)}).operator_norm;
}

std::uint64_t potential_hash(const LocalPotential& pot) {
  // FNV-1a over a canonical byte stream of the terms
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  mix(&pot.k, sizeof(pot.k));
  mix(&pot.lattice.n_sites, sizeof(int));
  mix(&pot.lattice.local_dim, sizeof(int));
  for (const auto& t : pot.terms) {
    mix(&t.center, sizeof(int));
    for (int s : t.op.support.sites()) mix(&s, sizeof(int));
    for (std::int64_t j = 0; j < t.op.mat.cols(); ++j)
      for (std::int64_t i = 0; i < t.op.mat.rows(); ++i) {
        double re = t.op.mat(i, j).real(), im = t.op.mat(i, j).imag();
        mix(&re, sizeof(double));
        mix(&im, sizeof(double));
      }
  }
  return h;
}

}  // namespace gibbslab
