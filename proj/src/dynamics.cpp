#include "gibbslab/dynamics.hpp"

#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "gibbslab/entropy.hpp"
#include "gibbslab/random_states.hpp"

namespace gibbslab {

namespace {

Region full_region(const GibbsState& s) { return Region::full(s.lattice()); }

void require_full_chain(const GibbsState& s, const ChainOp& rho, const char* who) {
  if (rho.support != full_region(s)) throw Error(std::string(who) + ": state must live on the full chain");
}

}  // namespace

ChainOp heat_bath_expectation(const GibbsState& sigma, const Region& a, const ChainOp& rho) {
  require_full_chain(sigma, rho, "heat_bath_expectation");
  const int d = sigma.lattice().local_dim;
  Region ac = a.complement_in(sigma.lattice());
  Matrix rho_ac = mod_partial_trace(rho, a, d).mat;
  if (ac.empty()) {
    // E*_Lambda(rho) = sigma tr[rho]
    return {rho.support, sigma.sigma().mat * rho.mat.trace()};
  }
  Matrix inv_sqrt_ac =
      embed(ChainOp{ac, sigma.reduced_inv_sqrt(ac)}, full_region(sigma), d).mat;
  Matrix lift = sigma.sigma_sqrt() * inv_sqrt_ac;
  return {rho.support, lift * rho_ac * lift.adjoint()};
}

ChainOp dual_expectation(const GibbsState& sigma, const Region& a, const ChainOp& f) {
  require_full_chain(sigma, f, "dual_expectation");
  const int d = sigma.lattice().local_dim;
  Region ac = a.complement_in(sigma.lattice());
  Matrix inner = sigma.sigma_sqrt() * f.mat * sigma.sigma_sqrt();
  if (ac.empty()) {
    return {f.support, Matrix::Identity(f.dim(), f.dim()) * inner.trace()};
  }
  Matrix traced = mod_partial_trace({f.support, inner}, a, d).mat;
  Matrix inv_sqrt_ac =
      embed(ChainOp{ac, sigma.reduced_inv_sqrt(ac)}, full_region(sigma), d).mat;
  return {f.support, inv_sqrt_ac * traced * inv_sqrt_ac};
}

double kms_inner(const GibbsState& sigma, const ChainOp& f, const ChainOp& g) {
  return std::real((f.mat * sigma.sigma_sqrt() * g.mat * sigma.sigma_sqrt()).trace());
}

HeatBathGenerator HeatBathGenerator::site_sum(std::shared_ptr<const GibbsState> sigma, Region a) {
  HeatBathGenerator g;
  g.sigma_ = std::move(sigma);
  g.region_ = std::move(a);
  g.single_block_ = false;
  for (int x : g.region_.sites()) g.parts_.push_back(Region({x}));
  const int d = g.sigma_->lattice().local_dim;
  Region full = Region::full(g.sigma_->lattice());
  for (const Region& p : g.parts_) {
    Region pc = p.complement_in(g.sigma_->lattice());
    Matrix inv_sqrt =
        pc.empty() ? Matrix::Identity(g.dim(), g.dim())
                   : embed(ChainOp{pc, g.sigma_->reduced_inv_sqrt(pc)}, full, d).mat;
    g.lift_.push_back(g.sigma_->sigma_sqrt() * inv_sqrt);
    g.colift_.push_back(std::move(inv_sqrt));
  }
  return g;
}

HeatBathGenerator HeatBathGenerator::single_block(std::shared_ptr<const GibbsState> sigma,
                                                  Region a) {
  HeatBathGenerator g = site_sum(std::move(sigma), a);
  g.parts_.clear();
  g.lift_.clear();
  g.colift_.clear();
  g.single_block_ = true;
  g.parts_.push_back(g.region_);
  const int d = g.sigma_->lattice().local_dim;
  Region full = Region::full(g.sigma_->lattice());
  Region pc = g.region_.complement_in(g.sigma_->lattice());
  Matrix inv_sqrt = pc.empty()
                        ? Matrix::Identity(g.dim(), g.dim())
                        : embed(ChainOp{pc, g.sigma_->reduced_inv_sqrt(pc)}, full, d).mat;
  g.lift_.push_back(g.sigma_->sigma_sqrt() * inv_sqrt);
  g.colift_.push_back(std::move(inv_sqrt));
  return g;
}

Matrix HeatBathGenerator::apply(const Matrix& rho) const {
  const int d = sigma_->lattice().local_dim;
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  ChainOp wrapped{Region::full(sigma_->lattice()), rho};
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    Matrix marg = mod_partial_trace(wrapped, parts_[i], d).mat;
    out += lift_[i] * marg * lift_[i].adjoint() - rho;
  }
  return out;
}

Matrix HeatBathGenerator::apply_dual(const Matrix& f) const {
  const int d = sigma_->lattice().local_dim;
  Matrix out = Matrix::Zero(f.rows(), f.cols());
  ChainOp inner{Region::full(sigma_->lattice()), sigma_->sigma_sqrt() * f * sigma_->sigma_sqrt()};
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    Matrix traced = mod_partial_trace(inner, parts_[i], d).mat;
    out += colift_[i] * traced * colift_[i] - f;
  }
  return out;
}

Superoperator HeatBathGenerator::as_superop() const {
  return {dim(), [this](const Matrix& rho) { return apply(rho); }};
}

const Matrix& HeatBathGenerator::dense(std::int64_t dense_cap) const {
  std::scoped_lock lock(cache_->mutex);
  if (!cache_->dense) cache_->dense = vectorize(as_superop(), dense_cap);
  return *cache_->dense;
}

HeatBathGenerator lindbladian(std::shared_ptr<const GibbsState> sigma, const Region& a) {
  return HeatBathGenerator::site_sum(std::move(sigma), a);
}

HeatBathGenerator single_block_generator(std::shared_ptr<const GibbsState> sigma,
                                         const Region& a) {
  if (a.empty()) throw Error("single_block_generator: empty region");
  return HeatBathGenerator::single_block(std::move(sigma), a);
}

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

ChainOp evolve_matrix_free(const HeatBathGenerator& gen, const ChainOp& rho0, double t,
                           const EvolveOptions& opts) {
  // Adaptive RK4 with step doubling; error controls the step against
  // rtol * max(1, ||L*(rho)||_1).
  Matrix rho = rho0.mat;
  double time = 0;
  auto rk4 = [&gen](const Matrix& y, double h) {
    Matrix k1 = gen.apply(y);
    Matrix k2 = gen.apply(y + 0.5 * h * k1);
    Matrix k3 = gen.apply(y + 0.5 * h * k2);
    Matrix k4 = gen.apply(y + h * k3);
    return (y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)).eval();
  };
  double h = t > 0 ? std::min(0.05, t) : 0;
  int guard = 0;
  while (time < t) {
    if (++guard > 2000000) throw Error("evolve: integrator failed to advance");
    h = std::min(h, t - time);
    Matrix big = rk4(rho, h);
    Matrix half = rk4(rk4(rho, h / 2), h / 2);
    double drive = std::max(1.0, norms({rho0.support, gen.apply(rho)}).trace_norm);
    double err = (big - half).cwiseAbs().maxCoeff();
    double target = opts.rtol * drive;
    if (err > target && h > 1e-12) {
      h *= 0.5;
      continue;
    }
    rho = hermitize(half);
    time += h;
    if (err < 0.1 * target) h *= 1.7;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -opts.psd_abort)
      throw Error("evolve: PSD violation " + std::to_string(es.eigenvalues().minCoeff()) +
                  " at t = " + std::to_string(time));
  }
  return {rho0.support, std::move(rho)};
}

}  // namespace

ChainOp evolve(const HeatBathGenerator& gen, const ChainOp& rho0, double t,
               const EvolveOptions& opts) {
  if (t < 0) throw Error("evolve: negative time");
  if (rho0.dim() != gen.dim()) throw Error("evolve: dimension mismatch");
  if (t == 0) return rho0;
  const std::int64_t d = gen.dim();
  bool dense = opts.mode == EvolveOptions::Mode::Dense ||
               (opts.mode == EvolveOptions::Mode::Auto && d * d <= opts.dense_cap);
  if (opts.mode == EvolveOptions::Mode::Dense && d * d > opts.dense_cap)
    throw CapError("evolve: dense mode requested but D^2 exceeds cap");
  if (!dense) return evolve_matrix_free(gen, rho0, t, opts);
  Matrix prop = (t * gen.dense(opts.dense_cap)).exp();
  Matrix out = unvec(prop * vec(rho0.mat), d);
  return {rho0.support, hermitize(out)};
}

double entropy_production(const GibbsState& sigma, const Region& a, const ChainOp& rho,
                          EpFlags* flags) {
  HeatBathGenerator gen = lindbladian(
      std::shared_ptr<const GibbsState>(&sigma, [](const GibbsState*) {}), a);
  return entropy_production(gen, rho, flags);
}

double entropy_production(const HeatBathGenerator& gen, const ChainOp& rho, EpFlags* flags) {
  MatrixFnResult log_rho = matrix_function(rho, MatrixFn::Log, true);
  if (flags) flags->clamped = log_rho.clamped;
  Matrix grad = log_rho.op.mat - gen.gibbs().log_sigma();
  return -std::real((gen.apply(rho.mat) * grad).trace());
}

double dirichlet_form(const GibbsState& sigma, const Region& a, const ChainOp& f) {
  ChainOp ef = dual_expectation(sigma, a, f);
  ChainOp diff{f.support, f.mat - ef.mat};
  return kms_inner(sigma, f, diff);
}

DetailedBalanceReport check_detailed_balance(const GibbsState& sigma, const Region& a,
                                             int n_samples, std::uint64_t seed, double tol) {
  StateSampler sampler(seed);
  std::shared_ptr<const GibbsState> alias(&sigma, [](const GibbsState*) {});
  HeatBathGenerator gen = lindbladian(alias, a);
  Region full = Region::full(sigma.lattice());
  DetailedBalanceReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  for (int i = 0; i < n_samples; ++i) {
    ChainOp f = sampler.hermitian_observable(full, sigma.lattice().local_dim);
    ChainOp g = sampler.hermitian_observable(full, sigma.lattice().local_dim);
    ChainOp lg{full, gen.apply_dual(g.mat)};
    ChainOp lf{full, gen.apply_dual(f.mat)};
    double r = std::abs(kms_inner(sigma, f, lg) - kms_inner(sigma, lf, g));
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

FixedPointReport fixed_point_equivalence_check(const GibbsState& sigma, const Region& a,
                                               const std::vector<ChainOp>& states, double tol) {
  FixedPointReport rep;
  rep.tol = tol;
  auto block_delta = [&](const ChainOp& rho) {
    ChainOp e = heat_bath_expectation(sigma, a, rho);
    return norms({rho.support, rho.mat - e.mat}).trace_norm;
  };
  for (const ChainOp& rho : states) {
    FixedPointRow row;
    row.delta_block = block_delta(rho);
    for (int x : a.sites()) {
      ChainOp e = heat_bath_expectation(sigma, Region({x}), rho);
      row.delta_sites.push_back(norms({rho.support, rho.mat - e.mat}).trace_norm);
    }
    double max_site = row.delta_sites.empty()
                          ? 0.0
                          : *std::max_element(row.delta_sites.begin(), row.delta_sites.end());
    if (row.delta_block <= tol) rep.eta_forward = std::max(rep.eta_forward, max_site);
    if (max_site <= tol) rep.eta_backward = std::max(rep.eta_backward, row.delta_block);
    rep.rows.push_back(std::move(row));
  }
  // sigma itself must sit in every kernel
  FixedPointRow srow;
  srow.delta_block = block_delta(sigma.sigma());
  double max_site = 0;
  for (int x : a.sites()) {
    ChainOp e = heat_bath_expectation(sigma, Region({x}), sigma.sigma());
    double dx = norms({sigma.sigma().support, sigma.sigma().mat - e.mat}).trace_norm;
    srow.delta_sites.push_back(dx);
    max_site = std::max(max_site, dx);
  }
  rep.sigma_fixed = srow.delta_block <= tol && max_site <= tol;
  rep.rows.push_back(std::move(srow));
  return rep;
}

}  // namespace gibbslab
