#include "gibbslab/entropy.hpp"

#include <cmath>

#include "gibbslab/gibbs.hpp"

namespace gibbslab {

double von_neumann_entropy(const ChainOp& rho, double eps_floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat, Eigen::EigenvaluesOnly);
  double s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = es.eigenvalues()[i];
    if (p > eps_floor) s -= p * std::log(p);
  }
  return s;
}

EntropyValue relative_entropy(const ChainOp& rho, const ChainOp& sigma, double eps_floor) {
  if (rho.support != sigma.support || rho.dim() != sigma.dim())
    throw Error("relative_entropy: operator mismatch");
  SpectralDecomposition ss = spectral(sigma.mat);
  EntropyValue out;

  // Weight rho puts on sigma's numerical null space decides finiteness.
  double null_weight = 0;
  for (int i = 0; i < ss.eigenvalues.size(); ++i) {
    if (ss.eigenvalues[i] < eps_floor) {
      Vector v = ss.eigenvectors.col(i);
      null_weight += std::real(v.dot(rho.mat * v));
      out.clamped = true;
    }
  }
  if (null_weight > 1e-12) {
    out.support_violation = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> er(rho.mat);
  double tr_rho_log_rho = 0;
  for (int i = 0; i < er.eigenvalues().size(); ++i) {
    double p = er.eigenvalues()[i];
    if (p > eps_floor) tr_rho_log_rho += p * std::log(p);
  }
  RealVector logs(ss.eigenvalues.size());
  for (int i = 0; i < ss.eigenvalues.size(); ++i)
    logs[i] = std::log(std::max(ss.eigenvalues[i], eps_floor));
  Matrix log_sigma = ss.eigenvectors * logs.asDiagonal() * ss.eigenvectors.adjoint();
  out.value = tr_rho_log_rho - std::real((rho.mat * log_sigma).trace());
  return out;
}

double relative_entropy_with_log(const ChainOp& rho, const Matrix& log_sigma, double eps_floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho.mat, Eigen::EigenvaluesOnly);
  double tr_rho_log_rho = 0;
  for (int i = 0; i < er.eigenvalues().size(); ++i) {
    double p = er.eigenvalues()[i];
    if (p > eps_floor) tr_rho_log_rho += p * std::log(p);
  }
  return tr_rho_log_rho - std::real((rho.mat * log_sigma).trace());
}

EntropyValue conditional_relative_entropy(const ChainOp& rho, const ChainOp& sigma,
                                          const Region& a, int local_dim, double eps_floor) {
  if (!rho.support.contains(a)) throw Error("conditional_relative_entropy: a outside support");
  EntropyValue full = relative_entropy(rho, sigma, eps_floor);
  Region rest = a.complement_in(rho.support);
  if (rest.empty()) return full;  // D_A with A the whole support is D itself
  EntropyValue marg = relative_entropy(partial_trace(rho, a, local_dim),
                                       partial_trace(sigma, a, local_dim), eps_floor);
  EntropyValue out;
  out.support_violation = full.support_violation || marg.support_violation;
  out.clamped = full.clamped || marg.clamped;
  out.value = out.support_violation ? std::numeric_limits<double>::infinity()
                                    : full.value - marg.value;
  return out;
}

double mutual_information(const ChainOp& rho, const Region& a, const Region& b, int local_dim) {
  if (!a.disjoint_from(b)) throw Error("mutual_information: overlapping regions");
  if (region_union(a, b) != rho.support)
    throw Error("mutual_information: a,b must partition the support");
  double sa = von_neumann_entropy(partial_trace(rho, b, local_dim));
  double sb = von_neumann_entropy(partial_trace(rho, a, local_dim));
  double sab = von_neumann_entropy(rho);
  return sa + sb - sab;
}

double conditional_mutual_information(const ChainOp& rho, const Region& a, const Region& b,
                                      const Region& c, int local_dim) {
  return cmi(rho, a, b, c, local_dim);
}

IdentityCheck cre_product_identity_check(const ChainOp& rho, const ChainOp& sigma_a,
                                         const ChainOp& sigma_b, const Region& a, const Region& b,
                                         int local_dim, double tol) {
  ChainOp prod = tensor(sigma_a, sigma_b, local_dim);
  EntropyValue lhs = conditional_relative_entropy(rho, prod, a, local_dim);
  double mi = mutual_information(rho, a, b, local_dim);
  EntropyValue da = relative_entropy(partial_trace(rho, b, local_dim), sigma_a);
  IdentityCheck out;
  out.lhs = lhs.value;
  out.rhs = mi + da.value;
  out.residual = std::abs(out.lhs - out.rhs);
  out.pass = lhs.is_finite() && da.is_finite() && out.residual <= tol;
  return out;
}

QmcIdentityCheck cre_qmc_identity_check(const ChainOp& rho, const ChainOp& sigma, const Region& a,
                                        const Region& b, const Region& c, int local_dim,
                                        double tol_qmc, double tol) {
  double defect = qmc_log_defect(sigma, a, b, c, local_dim);
  if (defect > tol_qmc)
    throw Error("cre_qmc_identity_check: sigma is not a QMC for this tripartition (defect " +
                std::to_string(defect) + ")");
  Region ab = region_union(a, b);
  EntropyValue lhs = conditional_relative_entropy(rho, sigma, a, local_dim);
  ChainOp rho_ab = partial_trace(rho, c, local_dim);
  ChainOp sigma_ab = partial_trace(sigma, c, local_dim);
  EntropyValue cre_ab = conditional_relative_entropy(rho_ab, sigma_ab, a, local_dim);
  double cmi_rho = cmi(rho, a, b, c, local_dim);
  QmcIdentityCheck out;
  out.lhs = lhs.value;
  out.rhs = cre_ab.value + cmi_rho;
  out.residual = std::abs(out.lhs - out.rhs);
  out.monotonicity_slack = out.lhs - cre_ab.value;
  out.pass = lhs.is_finite() && cre_ab.is_finite() && out.residual <= tol &&
             out.monotonicity_slack >= -1e-9;
  return out;
}

}  // namespace gibbslab
