#pragma once

// Test-only oracles, kept deliberately independent of the library's index
// machinery: per-entry digit decompositions, manual Kronecker products, and
// a pure probability-vector path for classical (diagonal) chains.

#include <cmath>
#include <vector>

#include "gibbslab/operators.hpp"

namespace oracle {

using gibbslab::ChainOp;
using gibbslab::Complex;
using gibbslab::Matrix;
using gibbslab::Region;

inline std::vector<int> digits_of(std::int64_t idx, int m, int d) {
  std::vector<int> out(m);
  for (int p = m - 1; p >= 0; --p) {
    out[p] = static_cast<int>(idx % d);
    idx /= d;
  }
  return out;
}

inline Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// op on `support` sites of an n-site chain, identities elsewhere, one entry
// at a time.
inline Matrix embed_naive(const Matrix& op, const std::vector<int>& support, int n, int d) {
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  Matrix out = Matrix::Zero(dim, dim);
  const int m = static_cast<int>(support.size());
  for (std::int64_t i = 0; i < dim; ++i) {
    auto di = digits_of(i, n, d);
    for (std::int64_t j = 0; j < dim; ++j) {
      auto dj = digits_of(j, n, d);
      bool match = true;
      for (int s = 0; s < n && match; ++s) {
        bool in_support = false;
        for (int t : support) in_support = in_support || (t == s);
        if (!in_support && di[s] != dj[s]) match = false;
      }
      if (!match) continue;
      std::int64_t ri = 0, rj = 0;
      for (int t = 0; t < m; ++t) {
        ri = ri * d + di[support[t]];
        rj = rj * d + dj[support[t]];
      }
      out(i, j) = op(ri, rj);
    }
  }
  return out;
}

// Partial trace over `traced` subset of `support` (both sorted site lists).
inline Matrix ptrace_naive(const Matrix& op, const std::vector<int>& support,
                           const std::vector<int>& traced, int d) {
  const int m = static_cast<int>(support.size());
  std::vector<int> kept_pos, traced_pos;
  for (int p = 0; p < m; ++p) {
    bool is_traced = false;
    for (int t : traced) is_traced = is_traced || (support[p] == t);
    if (is_traced)
      traced_pos.push_back(p);
    else
      kept_pos.push_back(p);
  }
  std::int64_t dim = op.rows();
  std::int64_t dk = 1;
  for (std::size_t i = 0; i < kept_pos.size(); ++i) dk *= d;
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t i = 0; i < dim; ++i) {
    auto di = digits_of(i, m, d);
    for (std::int64_t j = 0; j < dim; ++j) {
      auto dj = digits_of(j, m, d);
      bool diag = true;
      for (int p : traced_pos) diag = diag && (di[p] == dj[p]);
      if (!diag) continue;
      std::int64_t ri = 0, rj = 0;
      for (int p : kept_pos) {
        ri = ri * d + di[p];
        rj = rj * d + dj[p];
      }
      out(ri, rj) += op(i, j);
    }
  }
  return out;
}

inline double entropy_of_probs(const std::vector<double>& p) {
  double s = 0;
  for (double v : p)
    if (v > 1e-14) s -= v * std::log(v);
  return s;
}

// ----- Classical (diagonal) chain: probability vectors over spin strings ----

struct ClassicalChain {
  int n = 0;                    // qubit sites; site 0 = most significant bit
  std::vector<double> p;        // Gibbs probabilities, length 2^n

  static double spin(std::int64_t config, int site, int n) {
    return ((config >> (n - 1 - site)) & 1) ? -1.0 : 1.0;  // |0> has Z = +1
  }

  // E(s) = sum_{x<n-1} (J z_x z_{x+1} + h z_x) + h z_{n-1}
  static ClassicalChain ising(int n, double beta, double coupling, double field) {
    ClassicalChain c;
    c.n = n;
    std::int64_t dim = std::int64_t(1) << n;
    std::vector<double> energy(dim);
    double min_e = 1e300;
    for (std::int64_t s = 0; s < dim; ++s) {
      double e = 0;
      for (int x = 0; x < n; ++x) {
        double z = spin(s, x, n);
        e += field * z;
        if (x + 1 < n) e += coupling * z * spin(s, x + 1, n);
      }
      energy[s] = e;
      min_e = std::min(min_e, e);
    }
    double z = 0;
    c.p.resize(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
      c.p[s] = std::exp(-beta * (energy[s] - min_e));
      z += c.p[s];
    }
    for (double& v : c.p) v /= z;
    return c;
  }

  // marginal over the sites in r (sorted)
  std::vector<double> marginal(const std::vector<int>& r) const {
    std::int64_t dk = std::int64_t(1) << r.size();
    std::vector<double> out(dk, 0.0);
    std::int64_t dim = std::int64_t(1) << n;
    for (std::int64_t s = 0; s < dim; ++s) {
      std::int64_t idx = 0;
      for (int site : r) idx = (idx << 1) | ((s >> (n - 1 - site)) & 1);
      out[idx] += p[s];
    }
    return out;
  }
};

inline double classical_rel_ent(const std::vector<double>& rho, const std::vector<double>& sig) {
  double d = 0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (rho[i] > 1e-16) d += rho[i] * (std::log(rho[i]) - std::log(sig[i]));
  return d;
}

inline std::vector<double> classical_marginal(const std::vector<double>& rho, int n,
                                              const std::vector<int>& r) {
  ClassicalChain c;
  c.n = n;
  c.p = rho;
  return c.marginal(r);
}

// D_A for diagonal states: D(rho||sigma) - D(rho_{A^c}||sigma_{A^c})
inline double classical_cre(const std::vector<double>& rho, const std::vector<double>& sig, int n,
                            const std::vector<int>& a) {
  std::vector<int> rest;
  for (int s = 0; s < n; ++s) {
    bool in_a = false;
    for (int x : a) in_a = in_a || (x == s);
    if (!in_a) rest.push_back(s);
  }
  double full = classical_rel_ent(rho, sig);
  if (rest.empty()) return full;
  return full - classical_rel_ent(classical_marginal(rho, n, rest),
                                  classical_marginal(sig, n, rest));
}

// h-norm of a diagonal state: max |p_CD / (p_C p_D) - 1| over C u D configs.
inline double classical_h_norm(const std::vector<double>& sig, int n, const std::vector<int>& c,
                               const std::vector<int>& d) {
  std::vector<int> u = c;
  u.insert(u.end(), d.begin(), d.end());
  std::sort(u.begin(), u.end());
  auto p_cd = classical_marginal(sig, n, u);
  auto p_c = classical_marginal(sig, n, c);
  auto p_d = classical_marginal(sig, n, d);
  double worst = 0;
  for (std::size_t idx = 0; idx < p_cd.size(); ++idx) {
    // split the joint config index back into C and D parts
    std::int64_t ic = 0, id = 0;
    for (std::size_t pos = 0; pos < u.size(); ++pos) {
      int bit = (idx >> (u.size() - 1 - pos)) & 1;
      bool in_c = false;
      for (int x : c) in_c = in_c || (x == u[pos]);
      if (in_c)
        ic = (ic << 1) | bit;
      else
        id = (id << 1) | bit;
    }
    worst = std::max(worst, std::abs(p_cd[idx] / (p_c[ic] * p_d[id]) - 1.0));
  }
  return worst;
}

}  // namespace oracle
