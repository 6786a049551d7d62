#pragma once

#include <memory>

#include "gibbslab/gibbs.hpp"

namespace gibbslab {

// Heat-bath conditional expectation
//   E*_A(rho) = s^{1/2} s_{A^c}^{-1/2} rho_{A^c} s_{A^c}^{-1/2} s^{1/2},
// the Petz recovery map for tr_A composed with tr_A, s the Gibbs state.
ChainOp heat_bath_expectation(const GibbsState& sigma, const Region& a, const ChainOp& rho);

// Its Heisenberg dual E_A(f) = s_{A^c}^{-1/2} tr_A[s^{1/2} f s^{1/2}] s_{A^c}^{-1/2}.
ChainOp dual_expectation(const GibbsState& sigma, const Region& a, const ChainOp& f);

// KMS-weighted inner product <f,g>_s = tr[f s^{1/2} g s^{1/2}].
double kms_inner(const GibbsState& sigma, const ChainOp& f, const ChainOp& g);

// L*_A(rho) = sum_{x in A} (E*_x(rho) - rho), or the single-block variant
// E*_A(rho) - rho.  Site lifts P_x = s^{1/2} s_{x^c}^{-1/2} are cached so an
// application costs two matrix products per site.
class HeatBathGenerator {
 public:
  static HeatBathGenerator site_sum(std::shared_ptr<const GibbsState> sigma, Region a);
  static HeatBathGenerator single_block(std::shared_ptr<const GibbsState> sigma, Region a);

  const Region& region() const { return region_; }
  bool is_single_block() const { return single_block_; }
  const GibbsState& gibbs() const { return *sigma_; }
  std::shared_ptr<const GibbsState> gibbs_ptr() const { return sigma_; }
  std::int64_t dim() const { return sigma_->sigma().dim(); }

  Matrix apply(const Matrix& rho) const;       // Schroedinger picture
  Matrix apply_dual(const Matrix& f) const;    // Heisenberg picture
  Superoperator as_superop() const;
  const Matrix& dense(std::int64_t dense_cap = kDefaultDenseCap) const;

 private:
  HeatBathGenerator() = default;
  struct Cache {
    std::mutex mutex;
    std::optional<Matrix> dense;
  };
  std::shared_ptr<const GibbsState> sigma_;
  Region region_;
  bool single_block_ = false;
  std::vector<Region> parts_;        // singletons, or the block itself
  std::vector<Matrix> lift_;         // P = s^{1/2} s_{part^c}^{-1/2} per part
  std::vector<Matrix> colift_;       // s_{part^c}^{-1/2} embedded, for duals
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

HeatBathGenerator lindbladian(std::shared_ptr<const GibbsState> sigma, const Region& a);
HeatBathGenerator single_block_generator(std::shared_ptr<const GibbsState> sigma, const Region& a);

struct EvolveOptions {
  enum class Mode { Auto, Dense, MatrixFree };
  Mode mode = Mode::Auto;
  std::int64_t dense_cap = kDefaultDenseCap;
  double rtol = 1e-10;       // step controller target, scaled by ||L*(rho)||_1
  double psd_abort = 1e-8;   // abort if an eigenvalue drops below -this
};

// e^{t L*}(rho0).  Dense mode exponentiates the vectorized generator; matrix-
// free mode integrates with adaptive RK and Hermitian re-projection each step
// (no PSD projection; violations beyond psd_abort raise).
ChainOp evolve(const HeatBathGenerator& gen, const ChainOp& rho0, double t,
               const EvolveOptions& opts = {});

struct EpFlags {
  bool clamped = false;  // rho was rank-deficient; logs were clamped
};

// EP_A(rho) = -tr[L*_A(rho) (log rho - log sigma)].
double entropy_production(const GibbsState& sigma, const Region& a, const ChainOp& rho,
                          EpFlags* flags = nullptr);
double entropy_production(const HeatBathGenerator& gen, const ChainOp& rho,
                          EpFlags* flags = nullptr);

// <f, f - E_A(f)>_sigma, nonnegative.
double dirichlet_form(const GibbsState& sigma, const Region& a, const ChainOp& f);

struct DetailedBalanceReport {
  double max_residual = 0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

// Max of |<f, L(g)>_s - <L(f), g>_s| over sampled Hermitian pairs.
DetailedBalanceReport check_detailed_balance(const GibbsState& sigma, const Region& a,
                                             int n_samples, std::uint64_t seed,
                                             double tol = 1e-9);

struct FixedPointRow {
  double delta_block = 0;             // ||rho - E*_A(rho)||_1
  std::vector<double> delta_sites;    // ||rho - E*_x(rho)||_1 per x in A
};

struct FixedPointReport {
  std::vector<FixedPointRow> rows;
  // Empirical implication constants: eta_forward bounds max_x delta_x over
  // states with delta_block <= tol, eta_backward bounds delta_block over
  // states with all delta_x <= tol.  Reported, never assumed.
  double eta_forward = 0;
  double eta_backward = 0;
  double tol = 1e-10;
  bool sigma_fixed = false;  // all deltas <= tol on sigma itself
};

FixedPointReport fixed_point_equivalence_check(const GibbsState& sigma, const Region& a,
                                               const std::vector<ChainOp>& states,
                                               double tol = 1e-10);

}  // namespace gibbslab
