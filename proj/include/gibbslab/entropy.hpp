#pragma once

#include "gibbslab/operators.hpp"

namespace gibbslab {

// All entropies use the natural logarithm.

struct EntropyValue {
  double value = 0;                // meaningful only when !support_violation
  bool support_violation = false;  // supp(rho) not inside supp(sigma): D = +inf
  bool clamped = false;            // eigenvalue clamping happened along the way

  bool is_finite() const { return !support_violation; }
};

// S(rho) = -tr[rho log rho], with 0 log 0 = 0 below eps_floor.
double von_neumann_entropy(const ChainOp& rho, double eps_floor = kEpsFloor);

// D(rho||sigma) = tr[rho (log rho - log sigma)].
EntropyValue relative_entropy(const ChainOp& rho, const ChainOp& sigma,
                              double eps_floor = kEpsFloor);

// Fast path when log(sigma) is already known exactly (full-rank sigma).
double relative_entropy_with_log(const ChainOp& rho, const Matrix& log_sigma,
                                 double eps_floor = kEpsFloor);

// D_A(rho||sigma) = D(rho||sigma) - D(rho_{A^c}||sigma_{A^c}).
EntropyValue conditional_relative_entropy(const ChainOp& rho, const ChainOp& sigma,
                                          const Region& a, int local_dim,
                                          double eps_floor = kEpsFloor);

// I_rho(A:B) = D(rho_AB || rho_A (x) rho_B); a,b partition the support.
double mutual_information(const ChainOp& rho, const Region& a, const Region& b, int local_dim);

// I_rho(A:C|B) = S(AB) + S(BC) - S(ABC) - S(B).
double conditional_mutual_information(const ChainOp& rho, const Region& a, const Region& b,
                                      const Region& c, int local_dim);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double residual = 0;
  bool pass = false;
};

// D_A(rho || sigma_a (x) sigma_b) = I_rho(A:B) + D(rho_A||sigma_A).
IdentityCheck cre_product_identity_check(const ChainOp& rho, const ChainOp& sigma_a,
                                         const ChainOp& sigma_b, const Region& a, const Region& b,
                                         int local_dim, double tol = 1e-9);

struct QmcIdentityCheck {
  double lhs = 0;        // D_A(rho_ABC || sigma_ABC)
  double rhs = 0;        // D_A(rho_AB || sigma_AB) + I_rho(A:C|B)
  double residual = 0;
  double monotonicity_slack = 0;  // lhs - D_A(rho_AB||sigma_AB)
  bool pass = false;
};

// Valid only when sigma is a QMC between A <-> B <-> C; refuses otherwise.
QmcIdentityCheck cre_qmc_identity_check(const ChainOp& rho, const ChainOp& sigma, const Region& a,
                                        const Region& b, const Region& c, int local_dim,
                                        double tol_qmc = 1e-8, double tol = 1e-8);

}  // namespace gibbslab
