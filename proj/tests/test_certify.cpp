#include <doctest.h>

#include <cmath>

#include "gibbslab/certify.hpp"
#include "gibbslab/entropy.hpp"
#include "gibbslab/random_states.hpp"
#include "oracle_helpers.hpp"

using namespace gibbslab;

namespace {

std::shared_ptr<const GibbsState> ising_state(int n, double beta, double coupling = 1.0,
                                              double field = 0.3) {
  Lattice lat = make_chain(n, 2);
  return gibbs_state(preset_ising_zz(lat, coupling, field), beta);
}

std::shared_ptr<const GibbsState> product_state(int n, double beta, double field = 0.6) {
  Lattice lat = make_chain(n, 2);
  return gibbs_state(preset_ising_zz(lat, 0.0, field), beta);
}

std::vector<ChainOp> mixed_states(const GibbsState& s, int count, std::uint64_t seed) {
  StateSampler sampler(seed);
  Region full = Region::full(s.lattice());
  std::vector<ChainOp> out;
  for (int i = 0; i < count; ++i) {
    if (i % 3 == 0)
      out.push_back(sampler.hilbert_schmidt(full, s.lattice().local_dim));
    else if (i % 3 == 1)
      out.push_back(sampler.haar_floor(full, s.lattice().local_dim));
    else
      out.push_back(sampler.near_state(s.sigma(), 1e-2, s.lattice().local_dim));
  }
  return out;
}

}  // namespace

TEST_CASE("mlsi estimate on the single-qubit depolarizing generator") {
  // one site, H = 0: sigma = 1/2 and L*(rho) = sigma - rho
  Lattice lat = make_chain(1, 2);
  auto state = gibbs_state(preset_ising_zz(lat, 0.0, 0.0), 1.0);
  HeatBathGenerator gen = lindbladian(state, Region({0}));

  MlsiOptions opts;
  opts.n_random = 60;
  opts.optimizer_steps = 20;
  opts.seed = 5;
  MlsiEstimate est = mlsi_estimate(gen, opts);
  CHECK(est.alpha_hat >= 0.5 - 1e-6);
  CHECK(est.label == "inf upper bound");

  // the reported quotient is reproducible at the argmin state
  double ep = entropy_production(gen, est.argmin_state);
  double d = relative_entropy_with_log(est.argmin_state, state->log_sigma());
  CHECK(est.alpha_hat == doctest::Approx(ep / (2 * d)).epsilon(1e-9));
}

TEST_CASE("mlsi estimate matches a scalar grid-search oracle on diagonal states") {
  Lattice lat = make_chain(1, 2);
  auto state = gibbs_state(preset_ising_zz(lat, 0.0, 0.0), 1.0);
  HeatBathGenerator gen = lindbladian(state, Region({0}));

  // the grid is the sample set; the oracle works in plain scalars
  std::vector<ChainOp> grid;
  double oracle_min = 1e300;
  for (double p = 0.02; p < 0.985; p += 0.02) {
    if (std::abs(p - 0.5) < 1e-3) continue;
    grid.push_back({Region({0}), Eigen::Vector2cd(p, 1 - p).asDiagonal()});
    double d_rs = p * std::log(2 * p) + (1 - p) * std::log(2 * (1 - p));
    double d_sr = 0.5 * std::log(0.5 / p) + 0.5 * std::log(0.5 / (1 - p));
    oracle_min = std::min(oracle_min, (d_rs + d_sr) / (2 * d_rs));
  }
  MlsiOptions opts;
  opts.n_random = 0;
  opts.optimizer_steps = 0;
  opts.seed = 5;
  MlsiEstimate est = mlsi_estimate(gen, opts, &grid);
  CHECK(est.alpha_hat == doctest::Approx(oracle_min).epsilon(1e-4));
}

TEST_CASE("mlsi estimator never evaluates the quotient at sigma") {
  Lattice lat = make_chain(2, 2);
  auto state = gibbs_state(preset_ising_zz(lat, 1.0, 0.3), 0.5);
  HeatBathGenerator gen = lindbladian(state, Region::interval(0, 1));
  std::vector<ChainOp> only_sigma = {state->sigma()};
  MlsiOptions opts;
  opts.n_random = 0;
  opts.optimizer_steps = 0;
  opts.seed = 1;
  CHECK_THROWS_AS(mlsi_estimate(gen, opts, &only_sigma), Error);

  opts.n_random = 12;
  MlsiEstimate est = mlsi_estimate(gen, opts, &only_sigma);
  CHECK(est.degenerate_skipped >= 1);  // sigma itself was excluded
}

TEST_CASE("conditional mlsi at a single site is at least one half") {
  auto state = ising_state(3, 0.8);
  MlsiOptions opts;
  opts.n_random = 45;
  opts.optimizer_steps = 15;
  opts.seed = 11;
  for (int x : {0, 1, 2}) {
    MlsiEstimate est = conditional_mlsi_estimate(state, Region({x}), opts);
    CHECK(est.alpha_hat >= 0.5 - 1e-6);
  }
}

TEST_CASE("conditional mlsi on the full chain reduces to the plain estimate") {
  auto state = ising_state(2, 0.5);
  Region full = Region::interval(0, 1);
  MlsiOptions opts;
  opts.n_random = 30;
  opts.optimizer_steps = 0;
  opts.seed = 3;
  MlsiEstimate a = conditional_mlsi_estimate(state, full, opts);
  MlsiEstimate b = mlsi_estimate(lindbladian(state, full), opts);
  CHECK(a.alpha_hat == doctest::Approx(b.alpha_hat).epsilon(1e-12));
}

TEST_CASE("conditional mlsi for a product state on two sites") {
  auto prod = product_state(2, 0.7);
  MlsiOptions opts;
  opts.n_random = 40;
  opts.optimizer_steps = 10;
  opts.seed = 13;
  MlsiEstimate est = conditional_mlsi_estimate(prod, Region::interval(0, 1), opts);
  CHECK(est.alpha_hat >= 0.5 - 1e-6);
}

TEST_CASE("mlsi estimates are reflection invariant for a symmetric chain") {
  auto state = ising_state(4, 0.5, 1.0, 0.3);
  Region full = Region::interval(0, 3);
  StateSampler sampler(17);
  std::vector<ChainOp> states, mirrored;
  auto reflect = [](int s) { return 3 - s; };
  for (int i = 0; i < 12; ++i) {
    ChainOp rho = sampler.hilbert_schmidt(full, 2);
    states.push_back(rho);
    mirrored.push_back(permute_sites(rho, reflect, 2));
  }
  MlsiOptions opts;
  opts.n_random = 0;
  opts.optimizer_steps = 0;
  opts.seed = 1;
  HeatBathGenerator gen = lindbladian(state, full);
  MlsiEstimate direct = mlsi_estimate(gen, opts, &states);
  MlsiEstimate reflected = mlsi_estimate(gen, opts, &mirrored);
  CHECK(direct.alpha_hat == doctest::Approx(reflected.alpha_hat).epsilon(1e-6));
}

TEST_CASE("mixing norm") {
  auto prod = product_state(4, 0.9);
  CHECK(mixing_norm(*prod, Region({0, 1}), Region({2, 3})) < 1e-12);

  auto beta0 = ising_state(4, 0.0);
  CHECK(mixing_norm(*beta0, Region({0}), Region({2, 3})) < 1e-12);

  // direct dense evaluation oracle on the (k=1,l=1,n=1) splitting regions
  Splitting sp = standard_splitting(1, 1, 1);
  auto state = ising_state(5, 0.5);
  double got = mixing_norm(*state, sp.b_c, sp.a_c);
  CHECK(got > 0);
  Matrix s_c = oracle::ptrace_naive(state->sigma().mat, {0, 1, 2, 3, 4}, {2, 3, 4}, 2);
  Matrix s_d = oracle::ptrace_naive(state->sigma().mat, {0, 1, 2, 3, 4}, {0, 1, 2}, 2);
  Matrix s_cd = oracle::ptrace_naive(state->sigma().mat, {0, 1, 2, 3, 4}, {2}, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> ec(s_c), ed(s_d);
  Matrix p = oracle::kron2(ec.operatorInverseSqrt(), ed.operatorInverseSqrt());
  Matrix m = p * s_cd * p - Matrix::Identity(16, 16);
  Eigen::SelfAdjointEigenSolver<Matrix> em(m, Eigen::EigenvaluesOnly);
  CHECK(got == doctest::Approx(em.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-11));

  CHECK_THROWS_AS(mixing_norm(*state, Region({0, 1}), Region({1, 2})), Error);
}

TEST_CASE("mixing scan fits the h-norm decay") {
  auto classical = [](const Lattice& lat) {
    return preset_classical_random_field(lat, 99, 1.0, 0.5);
  };
  std::vector<std::array<int, 3>> family = {{1, 1, 1}, {1, 2, 1}, {1, 3, 1}};
  MixingConditionReport rep = mixing_scan(classical, 0.6, 2, family);
  REQUIRE(rep.h_norms.size() == 3);
  CHECK(rep.h_norms[0] > rep.h_norms[1]);
  CHECK(rep.h_norms[1] > rep.h_norms[2]);
  REQUIRE(rep.fitted_k2.has_value());
  CHECK(*rep.fitted_k2 > 0);
  CHECK(rep.weaker_pass);

  // beta = 0: exact factorization everywhere, fit degenerate
  MixingConditionReport zero = mixing_scan(classical, 0.0, 2, family);
  for (double h : zero.h_norms) CHECK(h <= 1e-12);
  CHECK(zero.exact_factorization);
  CHECK_FALSE(zero.fitted_k2.has_value());

  // uniform Ising decays monotonically as well
  auto ising = [](const Lattice& lat) { return preset_ising_zz(lat, 1.0, 0.3); };
  MixingConditionReport ir = mixing_scan(ising, 0.3, 2, family);
  CHECK(ir.h_norms[0] > ir.h_norms[1]);
  CHECK(ir.h_norms[1] > ir.h_norms[2]);

  // geometries over the cap are skipped but reported
  std::vector<std::array<int, 3>> too_big = {{1, 1, 1}, {3, 4, 3}};
  MixingConditionReport part = mixing_scan(classical, 0.4, 2, too_big);
  CHECK(part.h_norms.size() == 1);
  CHECK(part.skipped_l == std::vector<int>{4});
}

TEST_CASE("operator interval check and its equivalence with the h-norm") {
  auto prod = product_state(4, 0.8);
  OperatorIntervalCheck flat = operator_interval_check(*prod, Region({0, 1}), Region({2, 3}));
  CHECK(flat.pass);
  CHECK(flat.lambda_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(flat.lambda_max == doctest::Approx(1.0).epsilon(1e-10));

  // equivalence pass <=> h < 1/2 across a beta sweep, including failures
  for (double beta : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    auto state = ising_state(4, beta, 2.0, 0.1);
    Region c({0, 1}), d({2, 3});
    double h = mixing_norm(*state, c, d);
    OperatorIntervalCheck oi = operator_interval_check(*state, c, d);
    CHECK(oi.pass == (h < 0.5));
  }

  // strongly correlated diagonal state fails with a negative margin
  auto frozen = ising_state(4, 3.0, 3.0, 0.05);
  OperatorIntervalCheck bad = operator_interval_check(*frozen, Region({0, 1}), Region({2, 3}));
  CHECK_FALSE(bad.pass);
  CHECK((bad.lower_margin < 0 || bad.upper_margin < 0));
}

TEST_CASE("spin defect condition arithmetic") {
  SpinDefectCheck all_one = spin_defect_condition({1.0}, {1.0});
  CHECK(all_one.pass);  // 1 > 2/3 > 1/3
  CHECK(all_one.lhs == doctest::Approx(1.0));
  CHECK(all_one.mid == doctest::Approx(2.0 / 3.0));

  SpinDefectCheck near = spin_defect_condition({0.9}, {1.0});
  CHECK(near.pass);
  CHECK(near.lhs == doctest::Approx(0.81));

  CHECK_FALSE(spin_defect_condition({0.5}, {1.0}).pass);  // 0.25 < 2/3
  CHECK_THROWS_AS(spin_defect_condition({1.1}, {1.0}), Error);
  CHECK_THROWS_AS(spin_defect_condition({-1.0}, {1.0}), Error);
  CHECK_THROWS_AS(spin_defect_condition({}, {}), Error);
}

TEST_CASE("boundary factors of the commuting decomposition") {
  Splitting sp = standard_splitting(2, 1, 1);
  Lattice lat = make_chain(sp.n_sites, 2);

  // beta -> 0 makes every factor trivial and the condition holds
  auto free_state = gibbs_state(preset_defect_chain(lat), 0.0);
  SpinDefectFactors f0 = boundary_factor_extrema(*free_state, sp);
  REQUIRE(f0.gammas.size() == 1);
  CHECK(f0.gammas[0] == doctest::Approx(1.0));
  CHECK(f0.deltas[0] == doctest::Approx(1.0));
  CHECK(spin_defect_condition(f0.gammas, f0.deltas).pass);

  auto warm = gibbs_state(preset_defect_chain(lat, 4, 2.0, 0.6, 0.8), 0.2);
  SpinDefectFactors f = boundary_factor_extrema(*warm, sp);
  for (std::size_t i = 0; i < f.gammas.size(); ++i) {
    CHECK(f.gammas[i] > 0);
    CHECK(f.gammas[i] <= f.deltas[i] + 1e-12);
  }
  SpinDefectCheck verdict = spin_defect_condition(f.gammas, f.deltas);
  CHECK(verdict.lhs > 0);
}

TEST_CASE("quasi-factorization estimate") {
  QfOptions opts;
  opts.n_random = 60;
  opts.optimizer_steps = 10;
  opts.seed = 23;

  // product sigma: superadditivity gives f <= 1, anchors give f >= 1
  auto prod = product_state(3, 0.8);
  QfReport rp = qf_constant_estimate(prod, Region({0, 1}), opts);
  CHECK(rp.f_hat <= 1.0 + 1e-6);
  CHECK(rp.f_hat >= 1.0 - 1e-9);

  // |X| = 1: the ratio is identically one
  QfReport r1 = qf_constant_estimate(prod, Region({1}), opts);
  CHECK(r1.f_hat == doctest::Approx(1.0).epsilon(1e-12));

  // correlated chain: finite constant, witness reproduces the ratio
  auto state = ising_state(5, 0.5);
  QfReport rc = qf_constant_estimate(state, Region({1, 2}), opts);
  CHECK(std::isfinite(rc.f_hat));
  CHECK(rc.f_hat >= 1.0 - 1e-9);
  const ChainOp& w = rc.witness_state;
  double d_full = relative_entropy_with_log(w, state->log_sigma());
  auto cre = [&](const Region& x) {
    Region rest = x.complement_in(state->lattice());
    return d_full - relative_entropy_with_log(partial_trace(w, x, 2), state->reduced_log(rest));
  };
  double ratio = cre(Region({1, 2})) / (cre(Region({1})) + cre(Region({2})));
  CHECK(rc.f_hat == doctest::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("step1: relative entropy against the two conditional terms") {
  Splitting sp = standard_splitting(1, 1, 1);
  auto state = ising_state(5, 0.5);

  std::vector<ChainOp> sigma_only = {state->sigma()};
  SlackReport self = step1_check(*state, sp, sigma_only);
  CHECK(self.pass);
  CHECK(std::abs(self.slacks[0]) < 1e-9);

  auto states = mixed_states(*state, 100, 31);
  SlackReport rep = step1_check(*state, sp, states);
  CHECK(rep.pass);
  CHECK(rep.min_slack >= -1e-9);
  CHECK(rep.h_norm < 0.5);

  // product sigma: h = 0 and the bound collapses to D <= D_A + D_B
  auto prod = product_state(5, 0.8);
  SlackReport flat = step1_check(*prod, sp, mixed_states(*prod, 40, 33));
  CHECK(flat.h_norm < 1e-12);
  CHECK(flat.pass);

  // a frozen chain pushes h past 1/2: the bound is vacuous, reported as such
  Lattice lat5 = make_chain(5, 2);
  auto frozen = gibbs_state(preset_ising_zz(lat5, 3.0, 0.05), 3.0);
  SlackReport vac = step1_check(*frozen, sp, sigma_only);
  CHECK(vac.vacuous);
  CHECK_FALSE(vac.pass);
}

TEST_CASE("step2: conditional entropy is subadditive over separated blocks") {
  auto state = ising_state(7, 0.4);
  std::vector<Region> blocks = {Region({0, 1}), Region({5, 6})};  // distance 4 >= 2k-1

  std::vector<ChainOp> sigma_only = {state->sigma()};
  SlackReport self = step2_check(*state, blocks, sigma_only);
  CHECK(std::abs(self.slacks[0]) < 1e-9);

  SlackReport one = step2_check(*state, {Region({2, 3})}, mixed_states(*state, 10, 37));
  for (double s : one.slacks) CHECK(std::abs(s) < 1e-9);  // single block: equality

  SlackReport rep = step2_check(*state, blocks, mixed_states(*state, 60, 41));
  CHECK(rep.pass);
  CHECK(rep.min_slack >= -1e-9);

  CHECK_THROWS_AS(step2_check(*state, {Region({0, 1}), Region({3, 4})}, sigma_only), Error);
}

TEST_CASE("conditional relative entropy bound by the boundary term") {
  auto state = ising_state(6, 0.5);
  Region a({2, 3});

  std::vector<ChainOp> sigma_only = {state->sigma()};
  SlackReport self = lemma_bound_cre_check(*state, a, sigma_only);
  CHECK(self.slacks[0] >= -1e-12);

  SlackReport rep = lemma_bound_cre_check(*state, a, mixed_states(*state, 60, 43));
  CHECK(rep.pass);
  CHECK(rep.min_slack >= -1e-9);

  // product sigma: slack reduces to the boundary relative entropy, nonnegative
  auto prod = product_state(6, 0.7);
  SlackReport flat = lemma_bound_cre_check(*prod, a, mixed_states(*prod, 30, 47));
  CHECK(flat.pass);
}

TEST_CASE("assembled lower bound arithmetic and monotonicity") {
  MlsiEstimate half;
  half.alpha_hat = 0.5;
  AssembledBound b0 = assemble_lower_bound(0.0, {half});
  CHECK(b0.k_tilde == doctest::Approx(0.5));
  CHECK(b0.alpha_lower_certificate == doctest::Approx(0.25));

  AssembledBound b1 = assemble_lower_bound(0.25, {half});
  CHECK(b1.k_tilde == doctest::Approx(0.25));
  CHECK(b1.alpha_lower_certificate == doctest::Approx(0.125));

  MlsiEstimate low;
  low.alpha_hat = 0.3;
  AssembledBound b2 = assemble_lower_bound(0.25, {half, low});
  CHECK(b2.alpha_lower_certificate == doctest::Approx(0.25 * 0.3));

  // monotone: smaller h or larger min alpha never shrink the certificate
  double prev = -1;
  for (double h : {0.4, 0.3, 0.2, 0.1, 0.0}) {
    double cert = assemble_lower_bound(h, {half}).alpha_lower_certificate;
    CHECK(cert >= prev);
    prev = cert;
  }
  QfReport qf;
  qf.f_hat = 2.0;
  std::vector<QfReport> qfs = {qf};
  AssembledBound rig = assemble_lower_bound(0.0, {half}, &qfs);
  REQUIRE(rig.rigorous_certificate.has_value());
  CHECK(*rig.rigorous_certificate == doctest::Approx(0.5 * 0.25));
  CHECK_FALSE(rig.caveat.empty());

  CHECK_THROWS_AS(assemble_lower_bound(0.6, {half}), Error);
  CHECK_THROWS_AS(assemble_lower_bound(0.1, {}), Error);
}

TEST_CASE("mixing time check") {
  // starting at sigma: everything is identically zero
  auto state = ising_state(3, 0.5);
  HeatBathGenerator gen = lindbladian(state, Region::interval(0, 2));
  MixingTimeReport at_sigma = mixing_time_check(gen, state->sigma(), {0.0, 0.5, 1.0});
  CHECK(at_sigma.pass);
  for (const auto& row : at_sigma.rows) CHECK(row.trace_dist < 1e-10);

  // single-site closed form: rho_t = e^{-t} rho0 + (1-e^{-t}) sigma
  Lattice lat1 = make_chain(1, 2);
  auto single = gibbs_state(preset_ising_zz(lat1, 0.0, 0.0), 1.0);
  HeatBathGenerator g1 = lindbladian(single, Region({0}));
  double p0 = 0.85;
  ChainOp rho0{Region({0}), Eigen::Vector2cd(p0, 1 - p0).asDiagonal()};
  std::vector<double> times = {0.0, 0.3, 0.7, 1.2, 2.0};
  MixingTimeReport rep = mixing_time_check(g1, rho0, times);
  CHECK(rep.pass);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double pt = std::exp(-times[i]) * p0 + (1 - std::exp(-times[i])) * 0.5;
    double expect_d = pt * std::log(2 * pt) + (1 - pt) * std::log(2 * (1 - pt));
    CHECK(rep.rows[i].rel_ent == doctest::Approx(expect_d).epsilon(1e-6));
    CHECK(rep.rows[i].trace_dist == doctest::Approx(2 * std::abs(pt - 0.5)).epsilon(1e-6));
  }

  // 4-site chain with a random start: all three certificates hold on the grid
  auto state4 = ising_state(4, 0.5);
  HeatBathGenerator g4 = lindbladian(state4, Region::interval(0, 3));
  StateSampler sampler(53);
  ChainOp r4 = sampler.haar_floor(Region::interval(0, 3), 2, 1e-4);
  std::vector<double> grid;
  for (double t = 0; t <= 10.0; t += 0.5) grid.push_back(t);
  MixingTimeReport full = mixing_time_check(g4, r4, grid);
  CHECK(full.pinsker_pass);
  CHECK(full.decay_pass);
  CHECK(full.prefactor_pass);
  CHECK(full.alpha_traj > 0);

  CHECK_THROWS_AS(mixing_time_check(g4, r4, {1.0, 0.5}), Error);
}
