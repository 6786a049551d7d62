#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gibbslab/dynamics.hpp"

namespace gibbslab {

struct MlsiOptions {
  int n_random = 120;        // random samples across the fixed ensembles
  int optimizer_steps = 40;  // finite-difference descent steps on rho = MM*/tr
  std::uint64_t seed = 1;
  double kernel_floor = 1e-10;  // skip quotients whose denominator is below this
};

struct MlsiEstimate {
  double alpha_hat = 0;  // smallest quotient found: an UPPER bound on the inf
  ChainOp argmin_state;
  int n_samples = 0;
  int degenerate_skipped = 0;
  std::vector<std::pair<int, double>> optimizer_trace;
  std::uint64_t seed = 0;
  std::string label = "inf upper bound";
};

// alpha(L*) = inf_rho EP(rho) / (2 D(rho||sigma)); random ensembles
// (Hilbert-Schmidt, Bures, sigma-neighborhood mixtures at eps in
// {1e-1,1e-2,1e-3}, Haar-floored diagonals) plus descent from the best
// sample.  States within 1e-10 trace distance of sigma are never evaluated.
MlsiEstimate mlsi_estimate(const HeatBathGenerator& gen, const MlsiOptions& opts,
                           const std::vector<ChainOp>* extra_states = nullptr);

// Conditional variant: EP_A / (2 D_A), skipping the kernel of D_A.
MlsiEstimate conditional_mlsi_estimate(std::shared_ptr<const GibbsState> sigma, const Region& a,
                                       const MlsiOptions& opts,
                                       const std::vector<ChainOp>* extra_states = nullptr);

// || s_C^{-1/2} (x) s_D^{-1/2}  s_CD  s_C^{-1/2} (x) s_D^{-1/2} - 1 ||_inf
double mixing_norm(const GibbsState& sigma, const Region& c, const Region& d);

struct MixingConditionReport {
  std::vector<int> l_values;
  std::vector<double> h_norms;  // one per geometry, order of l_values
  std::vector<int> chain_sizes;
  std::vector<int> skipped_l;      // geometries over the dimension cap
  std::optional<double> fitted_k1;  // h ~= K1 exp(-K2 l)
  std::optional<double> fitted_k2;
  double fit_residual = 0;  // max |log h - fit|
  bool weaker_pass = false;         // all norms < 1/2
  bool exact_factorization = false; // all norms <= 1e-12; fit degenerate
};

// Measures h on the C/D regions of standard splittings (C = B^c, D = A^c)
// for a family of (k, l, n) geometries and fits log h against l.
MixingConditionReport mixing_scan(const std::function<LocalPotential(const Lattice&)>& potential_for,
                                  double beta, int local_dim,
                                  const std::vector<std::array<int, 3>>& family,
                                  std::int64_t dim_cap = kDefaultDimCap);

struct OperatorIntervalCheck {
  bool pass = false;
  double lower_margin = 0;  // lambda_min - 1/2
  double upper_margin = 0;  // 3/2 - lambda_max
  double lambda_min = 0, lambda_max = 0;
};

// (1/2) s_C (x) s_D < s_CD < (3/2) s_C (x) s_D, by the spectrum of the
// symmetrically normalized s_CD; equivalent to mixing_norm < 1/2.
OperatorIntervalCheck operator_interval_check(const GibbsState& sigma, const Region& c,
                                              const Region& d);

struct SpinDefectFactors {
  std::vector<double> gammas;  // per splitting cell i
  std::vector<double> deltas;
};

// Per-interface eigen-extrema of the commuting boundary factors
// e^{-beta * (terms straddling the interface)}, grouped per splitting cell.
SpinDefectFactors boundary_factor_extrema(const GibbsState& sigma, const Splitting& sp);

struct SpinDefectCheck {
  bool pass = false;
  double lhs = 0;  // prod gamma_i^2
  double mid = 0;  // (2/3) prod delta_i^2
};

// prod gamma_i^2 > (2/3) prod delta_i^2 > 1/3.
SpinDefectCheck spin_defect_condition(const std::vector<double>& gammas,
                                      const std::vector<double>& deltas);

struct QfOptions {
  int n_random = 120;
  int optimizer_steps = 30;
  std::uint64_t seed = 1;
  double kernel_floor = 1e-10;
  int anchor_iterations = 400;  // conditional-expectation iterations per anchor
};

struct QfReport {
  Region region;
  double f_hat = 0;  // largest ratio D_X / sum_x D_x found: LOWER bound on sup
  ChainOp witness_state;
  int n_samples = 0;
  int degenerate_count = 0;  // samples skipped for denominator below floor
  std::vector<std::pair<int, double>> sample_ratios;  // (sample id, ratio)
  std::uint64_t seed = 0;
  std::string label = "sup lower bound";
};

QfReport qf_constant_estimate(std::shared_ptr<const GibbsState> sigma, const Region& x,
                              const QfOptions& opts);

struct SlackReport {
  std::vector<double> slacks;  // rhs - lhs per state
  double min_slack = 0;
  bool pass = false;
  bool vacuous = false;   // step1 only: h >= 1/2 makes the bound empty
  double h_norm = 0;      // step1 only
  double tol = 1e-9;
};

// D(rho||sigma) <= (1 - 2||h(s_{A^c B^c})||)^{-1} [D_A + D_B].
SlackReport step1_check(const GibbsState& sigma, const Splitting& sp,
                        const std::vector<ChainOp>& states, double tol = 1e-9);

// D_{union} <= sum_i D_{A_i} for blocks whose k-boundaries do not overlap.
SlackReport step2_check(const GibbsState& sigma, const std::vector<Region>& blocks,
                        const std::vector<ChainOp>& states, double tol = 1e-9);

// D_A(rho||sigma) <= D_A(rho||s_A (x) s_{A^c}) + D(rho_{Ad}||s_{Ad}).
SlackReport lemma_bound_cre_check(const GibbsState& sigma, const Region& a,
                                  const std::vector<ChainOp>& states, double tol = 1e-9);

struct AssembledBound {
  double k_tilde = 0;
  double alpha_lower_certificate = 0;      // k_tilde * min conditional alpha-hat
  std::optional<double> rigorous_certificate;  // k_tilde * min 1/(2 f_hat)
  std::string caveat;
};

// Step 3 with the measured h-norm in place of K1 e^{-K2 l} (tighter), plus
// the Step 4 substitution when qf estimates are supplied.  The alpha-hat
// inputs are inf upper bounds, so the assembled number is a heuristic
// certificate; the rigorous variant is conditional on f_hat >= true f.
AssembledBound assemble_lower_bound(double measured_h_norm,
                                    const std::vector<MlsiEstimate>& cond_alphas,
                                    const std::vector<QfReport>* qf = nullptr);
AssembledBound assemble_lower_bound(const MixingConditionReport& mix,
                                    const std::vector<MlsiEstimate>& cond_alphas,
                                    const std::vector<QfReport>* qf = nullptr);

struct TrajectoryRow {
  double t = 0;
  double trace_dist = 0;
  double rel_ent = 0;
  double ep = 0;
};

struct MixingTimeReport {
  std::vector<TrajectoryRow> rows;
  double alpha_traj = 0;  // min quotient EP/(2D) over sampled rows
  double prefactor = 0;   // sqrt(2 log ||sigma^{-1}||_inf)
  bool pinsker_pass = false;
  bool decay_pass = false;
  bool prefactor_pass = false;
  bool pass = false;
};

// Trajectory rows (t, ||rho_t - sigma||_1, D(rho_t||sigma), EP(rho_t)) and
// the three consistency checks: Pinsker, self-consistent exponential decay
// with the measured trajectory quotient, and the mixing-time display with
// the measured prefactor.
MixingTimeReport mixing_time_check(const HeatBathGenerator& gen, const ChainOp& rho0,
                                   const std::vector<double>& times,
                                   const EvolveOptions& eopts = {});

}  // namespace gibbslab
