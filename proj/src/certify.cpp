#include "gibbslab/certify.hpp"

#include <cmath>

#include "gibbslab/entropy.hpp"
#include "gibbslab/random_states.hpp"

namespace gibbslab {

namespace {

// One spectral decomposition of rho serves EP and the relative entropies.
struct StateWork {
  Matrix log_rho;
  double tr_rho_log_rho = 0;
  bool clamped = false;
};

StateWork analyze_state(const ChainOp& rho, double eps_floor = kEpsFloor) {
  SpectralDecomposition sd = spectral(rho.mat);
  StateWork w;
  RealVector logs(sd.eigenvalues.size());
  for (int i = 0; i < sd.eigenvalues.size(); ++i) {
    double p = sd.eigenvalues[i];
    if (p > eps_floor) {
      logs[i] = std::log(p);
      w.tr_rho_log_rho += p * logs[i];
    } else {
      logs[i] = std::log(eps_floor);
      w.clamped = true;
    }
  }
  w.log_rho = sd.eigenvectors * logs.asDiagonal() * sd.eigenvectors.adjoint();
  return w;
}

// EP and denominator for the (conditional) MLSI quotient, one eigensolve.
struct Quotient {
  double ep = 0;
  double denom = 0;  // 2 D or 2 D_A
  bool valid = false;
  double value() const { return ep / denom; }
};

class QuotientEvaluator {
 public:
  QuotientEvaluator(const HeatBathGenerator& gen, bool conditional, double kernel_floor)
      : gen_(gen), conditional_(conditional), kernel_floor_(kernel_floor) {
    const GibbsState& s = gen.gibbs();
    if (conditional_) {
      rest_ = gen.region().complement_in(s.lattice());
      if (rest_.empty()) conditional_ = false;
    }
  }

  Quotient operator()(const ChainOp& rho) const {
    const GibbsState& s = gen_.gibbs();
    StateWork w = analyze_state(rho);
    Quotient q;
    double d_full = w.tr_rho_log_rho - std::real((rho.mat * s.log_sigma()).trace());
    double denom = d_full;
    if (conditional_) {
      ChainOp marg = partial_trace(rho, gen_.region(), s.lattice().local_dim);
      denom -= relative_entropy_with_log(marg, s.reduced_log(rest_));
    }
    if (denom < kernel_floor_) return q;  // kernel or sigma itself: excluded
    Matrix grad = w.log_rho - s.log_sigma();
    q.ep = -std::real((gen_.apply(rho.mat) * grad).trace());
    q.denom = 2 * denom;
    q.valid = true;
    return q;
  }

 private:
  const HeatBathGenerator& gen_;
  bool conditional_;
  Region rest_;
  double kernel_floor_;
};

MlsiEstimate estimate_quotient_inf(const HeatBathGenerator& gen, bool conditional,
                                   const MlsiOptions& opts,
                                   const std::vector<ChainOp>* extra_states) {
  const GibbsState& s = gen.gibbs();
  const Region full = Region::full(s.lattice());
  const int d = s.lattice().local_dim;
  QuotientEvaluator quotient(gen, conditional, opts.kernel_floor);
  StateSampler sampler(opts.seed);

  MlsiEstimate est;
  est.seed = opts.seed;
  est.alpha_hat = std::numeric_limits<double>::infinity();

  auto consider = [&](const ChainOp& rho) {
    if (trace_distance(rho, s.sigma()) < 1e-10) {
      ++est.degenerate_skipped;
      return false;
    }
    Quotient q = quotient(rho);
    if (!q.valid) {
      ++est.degenerate_skipped;
      return false;
    }
    ++est.n_samples;
    if (q.value() < est.alpha_hat) {
      est.alpha_hat = q.value();
      est.argmin_state = rho;
    }
    return true;
  };

  const double eps_grid[3] = {1e-1, 1e-2, 1e-3};
  for (int i = 0; i < opts.n_random; ++i) {
    switch (i % 6) {
      case 0: consider(sampler.hilbert_schmidt(full, d)); break;
      case 1: consider(sampler.bures(full, d)); break;
      case 2: consider(sampler.haar_floor(full, d)); break;
      default: consider(sampler.near_state(s.sigma(), eps_grid[i % 3], d)); break;
    }
  }
  if (extra_states)
    for (const ChainOp& rho : *extra_states) consider(rho);
  if (!std::isfinite(est.alpha_hat)) throw Error("mlsi_estimate: all samples degenerate");

  // Descent on rho = M M^dagger / tr along random directions with central
  // finite differences; deterministic given the seed.
  SpectralDecomposition sd = spectral(est.argmin_state.mat);
  const std::int64_t n = est.argmin_state.dim();
  Matrix m = sd.eigenvectors *
             sd.eigenvalues.cwiseMax(1e-12).cwiseSqrt().cast<Complex>().asDiagonal();
  auto state_of = [&](const Matrix& factor) {
    Matrix rho = factor * factor.adjoint();
    rho /= rho.trace().real();
    return ChainOp{full, std::move(rho)};
  };
  auto objective = [&](const Matrix& factor) {
    ChainOp rho = state_of(factor);
    if (trace_distance(rho, s.sigma()) < 1e-10) return std::numeric_limits<double>::infinity();
    Quotient q = quotient(rho);
    return q.valid ? q.value() : std::numeric_limits<double>::infinity();
  };
  double current = est.alpha_hat;
  double step = 0.1;
  est.optimizer_trace.emplace_back(0, current);
  for (int it = 1; it <= opts.optimizer_steps; ++it) {
    Matrix dir = sampler.ginibre(n);
    dir /= dir.norm();
    const double h = 1e-5;
    double plus = objective(m + h * dir);
    double minus = objective(m - h * dir);
    if (!std::isfinite(plus) || !std::isfinite(minus)) continue;
    double g = (plus - minus) / (2 * h);
    if (std::abs(g) < 1e-14) continue;
    double sign = g > 0 ? -1.0 : 1.0;
    bool moved = false;
    for (double alpha = step; alpha > 1e-8; alpha *= 0.5) {
      Matrix trial = m + sign * alpha * dir;
      double val = objective(trial);
      if (val < current) {
        m = trial;
        current = val;
        moved = true;
        step = std::min(0.5, alpha * 1.5);
        break;
      }
    }
    if (!moved) step *= 0.7;
    est.optimizer_trace.emplace_back(it, current);
  }
  if (current < est.alpha_hat) {
    est.alpha_hat = current;
    est.argmin_state = state_of(m);
  }
  return est;
}

}  // namespace

MlsiEstimate mlsi_estimate(const HeatBathGenerator& gen, const MlsiOptions& opts,
                           const std::vector<ChainOp>* extra_states) {
  if (gen.gibbs().min_eigenvalue() <= 0)
    throw Error("mlsi_estimate: generator is not primitive (rank-deficient sigma)");
  return estimate_quotient_inf(gen, false, opts, extra_states);
}

MlsiEstimate conditional_mlsi_estimate(std::shared_ptr<const GibbsState> sigma, const Region& a,
                                       const MlsiOptions& opts,
                                       const std::vector<ChainOp>* extra_states) {
  HeatBathGenerator gen = lindbladian(std::move(sigma), a);
  return estimate_quotient_inf(gen, true, opts, extra_states);
}

double mixing_norm(const GibbsState& sigma, const Region& c, const Region& d) {
  if (!c.disjoint_from(d)) throw Error("mixing_norm: regions overlap");
  const int ld = sigma.lattice().local_dim;
  Region u = region_union(c, d);
  ChainOp s_cd = sigma.reduced(u);
  ChainOp pc = embed(ChainOp{c, sigma.reduced_inv_sqrt(c)}, u, ld);
  ChainOp pd = embed(ChainOp{d, sigma.reduced_inv_sqrt(d)}, u, ld);
  Matrix p = pc.mat * pd.mat;
  Matrix m = p * s_cd.mat * p - Matrix::Identity(s_cd.dim(), s_cd.dim());
  return norms({u, std::move(m)}).operator_norm;
}

MixingConditionReport mixing_scan(
    const std::function<LocalPotential(const Lattice&)>& potential_for, double beta, int local_dim,
    const std::vector<std::array<int, 3>>& family, std::int64_t dim_cap) {
  MixingConditionReport rep;
  for (const auto& [k, l, n] : family) {
    Splitting sp = standard_splitting(k, l, n);
    Lattice lat;
    try {
      lat = make_chain(sp.n_sites, local_dim, dim_cap);
    } catch (const CapError&) {
      rep.skipped_l.push_back(l);
      continue;
    }
    auto state = gibbs_state(potential_for(lat), beta);
    rep.l_values.push_back(l);
    rep.chain_sizes.push_back(sp.n_sites);
    rep.h_norms.push_back(mixing_norm(*state, sp.b_c, sp.a_c));
  }
  if (rep.h_norms.empty()) throw Error("mixing_scan: no geometry fits the dimension cap");

  rep.weaker_pass = true;
  rep.exact_factorization = true;
  for (double h : rep.h_norms) {
    if (h >= 0.5) rep.weaker_pass = false;
    if (h > 1e-12) rep.exact_factorization = false;
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.h_norms.size(); ++i) {
    if (rep.h_norms[i] > 1e-12) {
      xs.push_back(rep.l_values[i]);
      ys.push_back(std::log(rep.h_norms[i]));
    }
  }
  if (xs.size() >= 2) {
    double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) > 1e-12) {
      double slope = (n * sxy - sx * sy) / denom;
      double intercept = (sy - slope * sx) / n;
      rep.fitted_k2 = -slope;
      rep.fitted_k1 = std::exp(intercept);
      for (std::size_t i = 0; i < xs.size(); ++i)
        rep.fit_residual = std::max(rep.fit_residual,
                                    std::abs(ys[i] - (intercept + slope * xs[i])));
    }
  }
  return rep;
}

OperatorIntervalCheck operator_interval_check(const GibbsState& sigma, const Region& c,
                                              const Region& d) {
  if (!c.disjoint_from(d)) throw Error("operator_interval_check: regions overlap");
  const int ld = sigma.lattice().local_dim;
  Region u = region_union(c, d);
  ChainOp s_cd = sigma.reduced(u);
  Matrix p = embed(ChainOp{c, sigma.reduced_inv_sqrt(c)}, u, ld).mat *
             embed(ChainOp{d, sigma.reduced_inv_sqrt(d)}, u, ld).mat;
  Matrix m = p * s_cd.mat * p;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  OperatorIntervalCheck out;
  out.lambda_min = es.eigenvalues().minCoeff();
  out.lambda_max = es.eigenvalues().maxCoeff();
  out.lower_margin = out.lambda_min - 0.5;
  out.upper_margin = 1.5 - out.lambda_max;
  out.pass = out.lower_margin > 0 && out.upper_margin > 0;
  return out;
}

SpinDefectFactors boundary_factor_extrema(const GibbsState& sigma, const Splitting& sp) {
  if (sigma.lattice().n_sites != sp.n_sites)
    throw Error("boundary_factor_extrema: splitting does not match the chain");
  const LocalPotential& pot = sigma.potential();
  const double beta = sigma.beta();

  // interface after the last site of each left segment, in chain order:
  // C_i|E_i, E_i|D_i, D_i|F_i, F_i|C_{i+1}, ..., C_n|E_n, E_n|D_n.
  std::vector<int> cuts;
  for (int i = 0; i < sp.n_blocks; ++i) {
    cuts.push_back(sp.c_segments[i].sites().back());
    cuts.push_back(sp.e_segments[i].sites().back());
    if (i + 1 < sp.n_blocks) {
      cuts.push_back(sp.d_segments[i].sites().back());
      cuts.push_back(sp.f_segments[i].sites().back());
    }
  }

  auto factor_extrema = [&](int cut) {
    Region supp;
    std::vector<const PotentialTerm*> straddling;
    for (const auto& t : pot.terms) {
      if (t.op.support.sites().front() <= cut && t.op.support.sites().back() > cut) {
        straddling.push_back(&t);
        supp = region_union(supp, t.op.support);
      }
    }
    if (straddling.empty()) return std::pair<double, double>(1.0, 1.0);
    std::int64_t dim = ipow(pot.lattice.local_dim, supp.size());
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto* t : straddling) h += embed(t->op, supp, pot.lattice.local_dim).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    // factor = e^{-beta h}: extrema map through the exponential
    double gamma = std::exp(-beta * es.eigenvalues().maxCoeff());
    double delta = std::exp(-beta * es.eigenvalues().minCoeff());
    return std::pair<double, double>(gamma, delta);
  };

  SpinDefectFactors out;
  std::size_t pos = 0;
  for (int i = 0; i < sp.n_blocks; ++i) {
    int group = (i + 1 < sp.n_blocks) ? 4 : 2;
    double g = 1, d = 1;
    for (int j = 0; j < group; ++j, ++pos) {
      auto [gj, dj] = factor_extrema(cuts[pos]);
      g *= gj;
      d *= dj;
    }
    out.gammas.push_back(g);
    out.deltas.push_back(d);
  }
  return out;
}

SpinDefectCheck spin_defect_condition(const std::vector<double>& gammas,
                                      const std::vector<double>& deltas) {
  if (gammas.size() != deltas.size() || gammas.empty())
    throw Error("spin_defect_condition: gamma/delta lists must match and be nonempty");
  SpinDefectCheck out;
  out.lhs = 1;
  out.mid = 2.0 / 3.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i] <= 0 || deltas[i] <= 0)
      throw Error("spin_defect_condition: factors must be positive");
    if (gammas[i] > deltas[i] + 1e-12)
      throw Error("spin_defect_condition: gamma_i must not exceed delta_i");
    out.lhs *= gammas[i] * gammas[i];
    out.mid *= deltas[i] * deltas[i];
  }
  out.pass = out.lhs > out.mid && out.mid > 1.0 / 3.0;
  return out;
}

namespace {

double cre_of(const GibbsState& s, const ChainOp& rho, const Region& x, double* d_full_cache) {
  const int ld = s.lattice().local_dim;
  double d_full;
  if (d_full_cache && *d_full_cache >= 0) {
    d_full = *d_full_cache;
  } else {
    d_full = relative_entropy_with_log(rho, s.log_sigma());
    if (d_full_cache) *d_full_cache = d_full;
  }
  Region rest = x.complement_in(s.lattice());
  if (rest.empty()) return d_full;
  ChainOp marg = partial_trace(rho, x, ld);
  return d_full - relative_entropy_with_log(marg, s.reduced_log(rest));
}

}  // namespace

QfReport qf_constant_estimate(std::shared_ptr<const GibbsState> sigma, const Region& x,
                              const QfOptions& opts) {
  if (x.empty()) throw Error("qf_constant_estimate: empty region");
  const GibbsState& s = *sigma;
  const Region full = Region::full(s.lattice());
  const int ld = s.lattice().local_dim;
  StateSampler sampler(opts.seed);

  QfReport rep;
  rep.region = x;
  rep.seed = opts.seed;
  rep.f_hat = -std::numeric_limits<double>::infinity();

  auto ratio_of = [&](const ChainOp& rho) -> std::optional<double> {
    double d_full = -1;
    double num = cre_of(s, rho, x, &d_full);
    double den = 0;
    for (int site : x.sites()) den += cre_of(s, rho, Region({site}), &d_full);
    if (den < opts.kernel_floor) return std::nullopt;
    return num / den;
  };
  int sample_id = 0;
  auto consider = [&](const ChainOp& rho) {
    ++sample_id;
    auto r = ratio_of(rho);
    if (!r) {
      ++rep.degenerate_count;
      return;
    }
    ++rep.n_samples;
    rep.sample_ratios.emplace_back(sample_id, *r);
    if (*r > rep.f_hat) {
      rep.f_hat = *r;
      rep.witness_state = rho;
    }
  };

  const double eps_grid[3] = {1e-1, 1e-2, 1e-3};
  for (int i = 0; i < opts.n_random; ++i) {
    switch (i % 5) {
      case 0: consider(sampler.hilbert_schmidt(full, ld)); break;
      case 1: consider(sampler.bures(full, ld)); break;
      case 2: consider(sampler.haar_floor(full, ld)); break;
      default: consider(sampler.near_state(s.sigma(), eps_grid[i % 3], ld)); break;
    }
  }

  // Anchor states: project a random state onto the joint fixed points of
  // {E*_y : y != x0}; there the denominator collapses to D_{x0} and the
  // ratio approaches 1 from below, pinning f_hat >= 1.
  if (x.size() > 1) {
    for (int pick = 0; pick < std::min(2, x.size()); ++pick) {
      int x0 = x.sites()[pick == 0 ? 0 : x.size() - 1];
      Region rest_of_x = Region({x0}).complement_in(x);
      ChainOp rho = sampler.haar_floor(full, ld, 1e-4);
      for (int it = 0; it < opts.anchor_iterations; ++it) {
        ChainOp next = heat_bath_expectation(s, rest_of_x, rho);
        double delta = trace_distance(next, rho);
        rho = std::move(next);
        if (delta < 1e-13) break;
      }
      consider(rho);
    }
  } else {
    // |X| = 1: the ratio is identically 1 wherever defined
    consider(sampler.hilbert_schmidt(full, ld));
  }

  if (!std::isfinite(rep.f_hat)) throw Error("qf_constant_estimate: all samples degenerate");

  // Ascent from the witness, same scheme as the MLSI descent but maximizing.
  SpectralDecomposition sd = spectral(rep.witness_state.mat);
  const std::int64_t n = rep.witness_state.dim();
  Matrix m = sd.eigenvectors *
             sd.eigenvalues.cwiseMax(1e-12).cwiseSqrt().cast<Complex>().asDiagonal();
  auto objective = [&](const Matrix& factor) -> double {
    Matrix rho = factor * factor.adjoint();
    rho /= rho.trace().real();
    auto r = ratio_of({full, rho});
    return r ? *r : -std::numeric_limits<double>::infinity();
  };
  double current = rep.f_hat;
  double step = 0.1;
  for (int it = 0; it < opts.optimizer_steps; ++it) {
    Matrix dir = sampler.ginibre(n);
    dir /= dir.norm();
    const double h = 1e-5;
    double plus = objective(m + h * dir);
    double minus = objective(m - h * dir);
    if (!std::isfinite(plus) || !std::isfinite(minus)) continue;
    double g = (plus - minus) / (2 * h);
    if (std::abs(g) < 1e-14) continue;
    double sign = g > 0 ? 1.0 : -1.0;
    bool moved = false;
    for (double alpha = step; alpha > 1e-8; alpha *= 0.5) {
      Matrix trial = m + sign * alpha * dir;
      double val = objective(trial);
      if (val > current) {
        m = trial;
        current = val;
        moved = true;
        step = std::min(0.5, alpha * 1.5);
        break;
      }
    }
    if (!moved) step *= 0.7;
  }
  if (current > rep.f_hat) {
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    rep.f_hat = current;
    rep.witness_state = {full, std::move(rho)};
  }
  return rep;
}

SlackReport step1_check(const GibbsState& sigma, const Splitting& sp,
                        const std::vector<ChainOp>& states, double tol) {
  if (sigma.lattice().n_sites != sp.n_sites)
    throw Error("step1_check: splitting does not match the chain");
  SlackReport rep;
  rep.tol = tol;
  rep.h_norm = mixing_norm(sigma, sp.a_c, sp.b_c);
  if (rep.h_norm >= 0.5) {
    rep.vacuous = true;
    rep.pass = false;
    return rep;
  }
  const double factor = 1.0 / (1.0 - 2.0 * rep.h_norm);
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const ChainOp& rho : states) {
    double d_full = -1;
    double da = cre_of(sigma, rho, sp.a, &d_full);
    double db = cre_of(sigma, rho, sp.b, &d_full);
    double slack = factor * (da + db) - d_full;
    rep.slacks.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

SlackReport step2_check(const GibbsState& sigma, const std::vector<Region>& blocks,
                        const std::vector<ChainOp>& states, double tol) {
  if (blocks.empty()) throw Error("step2_check: no blocks");
  const int k = sigma.potential().k;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      RegionDistance rd = region_distance(blocks[i], blocks[j]);
      if (rd.overlap_warning || rd.distance < 2 * k - 1)
        throw Error("step2_check: blocks closer than 2k-1; their boundaries overlap");
    }
  Region all;
  for (const Region& b : blocks) all = region_union(all, b);
  SlackReport rep;
  rep.tol = tol;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const ChainOp& rho : states) {
    double d_full = -1;
    double lhs = cre_of(sigma, rho, all, &d_full);
    double rhs = 0;
    for (const Region& b : blocks) rhs += cre_of(sigma, rho, b, &d_full);
    double slack = rhs - lhs;
    rep.slacks.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

SlackReport lemma_bound_cre_check(const GibbsState& sigma, const Region& a,
                                  const std::vector<ChainOp>& states, double tol) {
  const int ld = sigma.lattice().local_dim;
  const int k = sigma.potential().k;
  Region del = boundary(sigma.lattice(), a, k);
  Region a_del = region_union(a, del);
  Region outside = a_del.complement_in(sigma.lattice());
  if (!del.empty() && !outside.empty()) {
    double defect = qmc_log_defect(sigma.sigma(), a, del, outside, ld);
    if (defect > 1e-8)
      throw Error("lemma_bound_cre_check: sigma is not a QMC across A | dA | (Ad)^c");
  }
  Region a_c = a.complement_in(sigma.lattice());
  ChainOp product = tensor(sigma.reduced(a), sigma.reduced(a_c), ld);
  MatrixFnResult log_prod = matrix_function(product, MatrixFn::Log);
  const Matrix& log_marg_ac = sigma.reduced_log(a_c);
  ChainOp sigma_adel = sigma.reduced(a_del);
  MatrixFnResult log_adel = matrix_function(sigma_adel, MatrixFn::Log);

  SlackReport rep;
  rep.tol = tol;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const ChainOp& rho : states) {
    double lhs = relative_entropy_with_log(rho, sigma.log_sigma()) -
                 relative_entropy_with_log(partial_trace(rho, a, ld), log_marg_ac);
    double t1 = relative_entropy_with_log(rho, log_prod.op.mat) -
                relative_entropy_with_log(partial_trace(rho, a, ld), log_marg_ac);
    ChainOp rho_adel = reduced_state(rho, a_del, ld);
    double t2 = relative_entropy_with_log(rho_adel, log_adel.op.mat);
    double slack = t1 + t2 - lhs;
    rep.slacks.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

AssembledBound assemble_lower_bound(double measured_h_norm,
                                    const std::vector<MlsiEstimate>& cond_alphas,
                                    const std::vector<QfReport>* qf) {
  if (measured_h_norm >= 0.5)
    throw Error("assemble_lower_bound: measured h-norm >= 1/2, no certificate");
  if (cond_alphas.empty()) throw Error("assemble_lower_bound: no conditional estimates");
  AssembledBound out;
  out.k_tilde = (1.0 - 2.0 * measured_h_norm) / 2.0;
  double min_alpha = std::numeric_limits<double>::infinity();
  for (const auto& a : cond_alphas) min_alpha = std::min(min_alpha, a.alpha_hat);
  out.alpha_lower_certificate = out.k_tilde * min_alpha;
  if (qf && !qf->empty()) {
    double min_step4 = std::numeric_limits<double>::infinity();
    for (const auto& r : *qf) min_step4 = std::min(min_step4, 1.0 / (2.0 * r.f_hat));
    out.rigorous_certificate = out.k_tilde * min_step4;
  }
  out.caveat =
      "conditional alpha-hat values are upper bounds on infima, so the assembled "
      "certificate is heuristic; the rigorous variant uses 1/(2 f-hat) per block and is "
      "conditional on f-hat >= true f. K-tilde uses the measured h-norm, which only "
      "strengthens the bound relative to K1 exp(-K2 l).";
  return out;
}

AssembledBound assemble_lower_bound(const MixingConditionReport& mix,
                                    const std::vector<MlsiEstimate>& cond_alphas,
                                    const std::vector<QfReport>* qf) {
  if (!mix.weaker_pass)
    throw Error("assemble_lower_bound: mixing report fails the weaker condition");
  if (mix.h_norms.size() != 1)
    throw Error("assemble_lower_bound: pass the single-geometry h-norm explicitly");
  return assemble_lower_bound(mix.h_norms.front(), cond_alphas, qf);
}

MixingTimeReport mixing_time_check(const HeatBathGenerator& gen, const ChainOp& rho0,
                                   const std::vector<double>& times,
                                   const EvolveOptions& eopts) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || (i > 0 && times[i] <= times[i - 1]))
      throw Error("mixing_time_check: times must be ascending and nonnegative");
  }
  const GibbsState& s = gen.gibbs();
  MixingTimeReport rep;
  rep.prefactor = std::sqrt(2.0 * std::log(1.0 / s.min_eigenvalue()));

  ChainOp rho = rho0;
  double prev_t = 0;
  for (double t : times) {
    if (t > prev_t) rho = evolve(gen, rho, t - prev_t, eopts);
    prev_t = t;
    TrajectoryRow row;
    row.t = t;
    row.trace_dist = trace_distance(rho, s.sigma());
    StateWork w = analyze_state(rho);
    row.rel_ent = w.tr_rho_log_rho - std::real((rho.mat * s.log_sigma()).trace());
    row.ep = -std::real((gen.apply(rho.mat) * (w.log_rho - s.log_sigma())).trace());
    rep.rows.push_back(row);
  }

  rep.alpha_traj = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows)
    if (row.rel_ent > 1e-12) rep.alpha_traj = std::min(rep.alpha_traj, row.ep / (2 * row.rel_ent));
  if (!std::isfinite(rep.alpha_traj)) rep.alpha_traj = 0;  // started at sigma

  rep.pinsker_pass = true;
  rep.decay_pass = true;
  rep.prefactor_pass = true;
  const double d0 = rep.rows.empty() ? 0 : rep.rows.front().rel_ent;
  for (const auto& row : rep.rows) {
    if (row.trace_dist > std::sqrt(2 * std::max(0.0, row.rel_ent)) + 1e-9)
      rep.pinsker_pass = false;
    if (row.rel_ent > d0 * std::exp(-2 * rep.alpha_traj * row.t) * (1 + 1e-6) + 1e-12)
      rep.decay_pass = false;
    if (row.trace_dist > rep.prefactor * std::exp(-rep.alpha_traj * row.t) + 1e-9)
      rep.prefactor_pass = false;
  }
  rep.pass = rep.pinsker_pass && rep.decay_pass && rep.prefactor_pass;
  return rep;
}

}  // namespace gibbslab
