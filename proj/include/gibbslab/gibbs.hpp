#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "gibbslab/operators.hpp"

namespace gibbslab {

struct PotentialTerm {
  int center = 0;
  ChainOp op;  // support inside [center-(k-1), center+(k-1)] clipped to the chain
};

struct LocalPotential {
  Lattice lattice;
  int k = 1;          // locality radius
  double bound = 0;   // max operator norm over terms
  std::vector<PotentialTerm> terms;
};

LocalPotential make_potential(const Lattice& lat, int k, std::vector<PotentialTerm> terms);

// Named presets.  All three are diagonal in the computational basis, hence
// commuting; xx_chain is a commuting but non-diagonal family for tests.
LocalPotential preset_ising_zz(const Lattice& lat, double coupling = 1.0, double field = 0.3);
LocalPotential preset_classical_random_field(const Lattice& lat, std::uint64_t seed,
                                             double j_scale = 1.0, double h_scale = 0.5);
// One amplified term at defect_site with geometrically decaying couplings
// away from it.  This realizes the spin-defect scenario; the concrete
// Hamiltonian is this tool's own construction and reports label it so.
LocalPotential preset_defect_chain(const Lattice& lat, int defect_site = -1,
                                   double defect_strength = 2.0, double decay = 0.6,
                                   double base = 0.8);
LocalPotential preset_xx_chain(const Lattice& lat, double coupling = 0.7);

// H_A = sum of terms with center in A; supported on the union of term windows.
ChainOp hamiltonian(const LocalPotential& pot, const Region& region);

struct CommutingCheck {
  double max_commutator_norm = 0;
  bool pass = false;
};

CommutingCheck check_commuting(const LocalPotential& pot, double tol_comm = 1e-10);

// sigma = e^{-beta H} / tr e^{-beta H}, with the spectral data of H cached so
// sqrt / inverse sqrt / log of sigma are exact functions of the H spectrum.
class GibbsState {
 public:
  GibbsState(LocalPotential pot, double beta, bool override_commuting, double tol_comm);

  const Lattice& lattice() const { return potential_.lattice; }
  const LocalPotential& potential() const { return potential_; }
  double beta() const { return beta_; }
  bool tainted() const { return tainted_; }  // built over a non-commuting potential
  double min_eigenvalue() const { return min_eig_; }
  double log_partition() const { return log_z_; }

  const ChainOp& sigma() const { return sigma_; }
  const Matrix& log_sigma() const { return log_sigma_; }
  const Matrix& sigma_sqrt() const { return sigma_sqrt_; }
  const Matrix& sigma_inv_sqrt() const { return sigma_inv_sqrt_; }
  const ChainOp& hamiltonian_full() const { return h_full_; }

  // Reduced state tr_{R^c}[sigma]; fill-once cache keyed by region.
  const ChainOp& reduced(const Region& r) const;
  // Cached inverse square root / log of a reduced state, embedded nowhere.
  const Matrix& reduced_inv_sqrt(const Region& r) const;
  const Matrix& reduced_log(const Region& r) const;

 private:
  LocalPotential potential_;
  double beta_;
  bool tainted_ = false;
  ChainOp h_full_;
  ChainOp sigma_;
  Matrix log_sigma_, sigma_sqrt_, sigma_inv_sqrt_;
  double min_eig_ = 0, log_z_ = 0;

  mutable std::mutex mutex_;
  mutable std::map<std::vector<int>, ChainOp> reduced_;
  mutable std::map<std::vector<int>, Matrix> reduced_inv_sqrt_;
  mutable std::map<std::vector<int>, Matrix> reduced_log_;
};

std::shared_ptr<const GibbsState> gibbs_state(LocalPotential pot, double beta,
                                              bool override_commuting = false,
                                              double tol_comm = 1e-10);

ChainOp reduced_state(const GibbsState& state, const Region& region);
ChainOp reduced_state(const ChainOp& rho, const Region& region, int local_dim);

// I(A:C|B) for the reduction of rho onto a u b u c.
double cmi(const ChainOp& rho, const Region& a, const Region& b, const Region& c, int local_dim);

// || log s_ABC + log s_B - log s_BC - log s_AB ||_inf, all terms embedded on
// the joint support; zero exactly when sigma is a QMC between A <-> B <-> C.
double qmc_log_defect(const ChainOp& sigma, const Region& a, const Region& b, const Region& c,
                      int local_dim, double eps_floor = kEpsFloor);

std::uint64_t potential_hash(const LocalPotential& pot);

}  // namespace gibbslab
