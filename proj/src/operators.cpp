#include "gibbslab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace gibbslab {

ChainOp identity_op(const Region& support, int local_dim) {
  std::int64_t d = ipow(local_dim, support.size());
  return {support, Matrix::Identity(d, d)};
}

double hermiticity_defect(const Matrix& m) {
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

ChainOp make_hermitian(Region support, Matrix m, int local_dim, double tol_herm) {
  if (m.rows() != m.cols()) throw Error("make_hermitian: matrix not square");
  if (m.rows() != ipow(local_dim, support.size()))
    throw Error("make_hermitian: dimension does not match support");
  if (hermiticity_defect(m) > tol_herm) throw Error("make_hermitian: Hermiticity defect too large");
  return {std::move(support), std::move(m)};
}

ChainOp make_density(Region support, Matrix m, int local_dim, double tol_psd, double tol_tr) {
  ChainOp op = make_hermitian(std::move(support), std::move(m), local_dim, 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol_psd)
    throw Error("make_density: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  double tr = op.mat.trace().real();
  if (std::abs(tr - 1.0) > tol_tr)
    throw Error("make_density: trace " + std::to_string(tr) + " not 1");
  return op;
}

std::vector<std::int64_t> index_contributions(const Region& sub, const Region& whole,
                                              int local_dim) {
  if (!whole.contains(sub)) throw Error("index_contributions: sub not inside whole");
  const int m = whole.size();
  // stride of whole-position p (0 = leftmost = most significant)
  std::vector<std::int64_t> stride(m);
  for (int p = 0; p < m; ++p) stride[p] = ipow(local_dim, m - 1 - p);
  std::vector<std::int64_t> site_stride;
  for (int s : sub.sites()) {
    auto it = std::lower_bound(whole.sites().begin(), whole.sites().end(), s);
    site_stride.push_back(stride[it - whole.sites().begin()]);
  }
  const int ns = sub.size();
  const std::int64_t count = ipow(local_dim, ns);
  std::vector<std::int64_t> out(count, 0);
  std::vector<int> digits(ns, 0);
  for (std::int64_t i = 0; i < count; ++i) {
    std::int64_t v = 0;
    for (int j = 0; j < ns; ++j) v += digits[j] * site_stride[j];
    out[i] = v;
    for (int j = ns - 1; j >= 0; --j) {  // increment mixed-radix counter
      if (++digits[j] < local_dim) break;
      digits[j] = 0;
    }
  }
  return out;
}

ChainOp embed(const ChainOp& op, const Region& target, int local_dim) {
  if (!target.contains(op.support)) throw Error("embed: support not inside target");
  if (op.support == target) return op;
  Region rest = op.support.complement_in(target);
  auto map_s = index_contributions(op.support, target, local_dim);
  auto map_e = index_contributions(rest, target, local_dim);
  const std::int64_t dim = ipow(local_dim, target.size());
  Matrix out = Matrix::Zero(dim, dim);
  const std::int64_t ds = op.dim();
  for (std::int64_t j = 0; j < ds; ++j)
    for (std::int64_t i = 0; i < ds; ++i) {
      const Complex v = op.mat(i, j);
      if (v == Complex(0, 0)) continue;
      for (std::int64_t e : map_e) out(map_s[i] + e, map_s[j] + e) = v;
    }
  return {target, std::move(out)};
}

ChainOp embed(const ChainOp& op, const Lattice& lat) {
  return embed(op, Region::full(lat), lat.local_dim);
}

ChainOp partial_trace(const ChainOp& op, const Region& traced, int local_dim) {
  if (!op.support.contains(traced)) throw Error("partial_trace: traced not inside support");
  Region kept = traced.complement_in(op.support);
  auto map_k = index_contributions(kept, op.support, local_dim);
  auto map_t = index_contributions(traced, op.support, local_dim);
  const std::int64_t dk = ipow(local_dim, kept.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t j = 0; j < dk; ++j)
    for (std::int64_t i = 0; i < dk; ++i) {
      Complex acc = 0;
      for (std::int64_t t : map_t) acc += op.mat(map_k[i] + t, map_k[j] + t);
      out(i, j) = acc;
    }
  return {kept, std::move(out)};
}

ChainOp mod_partial_trace(const ChainOp& op, const Region& traced, int local_dim) {
  return embed(partial_trace(op, traced, local_dim), op.support, local_dim);
}

ChainOp tensor(const ChainOp& a, const ChainOp& b, int local_dim) {
  if (!a.support.disjoint_from(b.support)) throw Error("tensor: overlapping supports");
  Region u = region_union(a.support, b.support);
  ChainOp ea = embed(a, u, local_dim);
  ChainOp eb = embed(b, u, local_dim);
  return {u, ea.mat * eb.mat};
}

ChainOp permute_sites(const ChainOp& op, const std::function<int(int)>& site_map, int local_dim) {
  std::vector<int> image;
  for (int s : op.support.sites()) image.push_back(site_map(s));
  Region target(image);
  if (target.size() != op.support.size()) throw Error("permute_sites: map not injective on support");
  // column j of the permutation matrix: basis vector j of the old ordering
  // lands on the index where each old digit sits at its image position.
  const int m = op.support.size();
  std::vector<std::int64_t> new_stride(m);
  for (int j = 0; j < m; ++j) {
    int img = site_map(op.support.sites()[j]);
    auto it = std::lower_bound(target.sites().begin(), target.sites().end(), img);
    new_stride[j] = ipow(local_dim, m - 1 - static_cast<int>(it - target.sites().begin()));
  }
  const std::int64_t dim = op.dim();
  std::vector<std::int64_t> dest(dim);
  std::vector<int> digits(m, 0);
  for (std::int64_t i = 0; i < dim; ++i) {
    std::int64_t v = 0;
    for (int j = 0; j < m; ++j) v += digits[j] * new_stride[j];
    dest[i] = v;
    for (int j = m - 1; j >= 0; --j) {
      if (++digits[j] < local_dim) break;
      digits[j] = 0;
    }
  }
  Matrix out(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j)
    for (std::int64_t i = 0; i < dim; ++i) out(dest[i], dest[j]) = op.mat(i, j);
  return {target, std::move(out)};
}

SpectralDecomposition spectral(const Matrix& m, double tol_eig) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw Error("spectral: eigensolver failed");
  SpectralDecomposition sd{es.eigenvalues(), es.eigenvectors()};
  Matrix recon = sd.eigenvectors * sd.eigenvalues.asDiagonal() * sd.eigenvectors.adjoint();
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((recon - m).cwiseAbs().maxCoeff() > tol_eig * scale)
    throw Error("spectral: reconstruction defect above tolerance");
  return sd;
}

MatrixFnResult matrix_function(const ChainOp& m, MatrixFn fn, bool clamp, double eps_floor) {
  SpectralDecomposition sd = spectral(m.mat);
  const bool needs_positive =
      fn == MatrixFn::Log || fn == MatrixFn::InvSqrt || fn == MatrixFn::Inverse;
  bool clamped = false;
  RealVector vals = sd.eigenvalues;
  if (needs_positive) {
    for (int i = 0; i < vals.size(); ++i) {
      if (vals[i] < eps_floor) {
        if (!clamp)
          throw Error("matrix_function: eigenvalue " + std::to_string(vals[i]) +
                      " below floor; enable clamping or fix the input");
        vals[i] = eps_floor;
        clamped = true;
      }
    }
  }
  RealVector f(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    switch (fn) {
      case MatrixFn::Log: f[i] = std::log(vals[i]); break;
      case MatrixFn::Sqrt: f[i] = std::sqrt(std::max(0.0, vals[i])); break;
      case MatrixFn::InvSqrt: f[i] = 1.0 / std::sqrt(vals[i]); break;
      case MatrixFn::Exp: f[i] = std::exp(vals[i]); break;
      case MatrixFn::Inverse: f[i] = 1.0 / vals[i]; break;
    }
  }
  Matrix out = sd.eigenvectors * f.asDiagonal() * sd.eigenvectors.adjoint();
  return {{m.support, std::move(out)}, clamped};
}

Norms norms(const ChainOp& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.mat, Eigen::EigenvaluesOnly);
  Norms n;
  n.operator_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  n.trace_norm = es.eigenvalues().cwiseAbs().sum();
  return n;
}

double trace_distance(const ChainOp& a, const ChainOp& b) {
  if (a.support != b.support) throw Error("trace_distance: support mismatch");
  return norms({a.support, a.mat - b.mat}).trace_norm;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, std::int64_t dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SuperoperatorCheck verify_superoperator(const Superoperator& s, const Matrix* dense,
                                        int n_samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  auto random_matrix = [&] {
    Matrix m(s.domain_dim, s.domain_dim);
    for (std::int64_t j = 0; j < s.domain_dim; ++j)
      for (std::int64_t i = 0; i < s.domain_dim; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
  };
  SuperoperatorCheck out;
  for (int i = 0; i < n_samples; ++i) {
    Matrix a = random_matrix(), b = random_matrix();
    double ca = coeff(rng), cb = coeff(rng);
    Matrix lhs = s.apply(ca * a + cb * b);
    Matrix rhs = ca * s.apply(a) + cb * s.apply(b);
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    out.linearity_residual =
        std::max(out.linearity_residual, (lhs - rhs).cwiseAbs().maxCoeff() / scale);
    if (dense) {
      Matrix via_dense = unvec((*dense) * vec(a), s.domain_dim);
      Matrix direct = s.apply(a);
      double dscale = std::max(1.0, direct.cwiseAbs().maxCoeff());
      out.dense_residual =
          std::max(out.dense_residual, (via_dense - direct).cwiseAbs().maxCoeff() / dscale);
    }
  }
  out.pass = out.linearity_residual <= tol && out.dense_residual <= tol;
  return out;
}

void save_operator(const ChainOp& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_operator: cannot open " + path);
  out << "gibbslab-operator 1\n";
  out << op.support.size();
  for (int s : op.support.sites()) out << " " << s;
  out << "\n" << op.dim() << "\n";
  char buf[64];
  for (std::int64_t i = 0; i < op.dim(); ++i) {
    for (std::int64_t j = 0; j < op.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", op.mat(i, j).real(), op.mat(i, j).imag());
      out << buf << (j + 1 < op.dim() ? " " : "");
    }
    out << "\n";
  }
}

ChainOp load_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_operator: cannot open " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "gibbslab-operator" || version != 1)
    throw Error("load_operator: bad header in " + path);
  int n_sites = 0;
  in >> n_sites;
  std::vector<int> sites(n_sites);
  for (int& s : sites) in >> s;
  std::int64_t dim = 0;
  in >> dim;
  Matrix m(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) {
      double re, im;
      if (!(in >> re >> im)) throw Error("load_operator: truncated file " + path);
      m(i, j) = Complex(re, im);
    }
  return {Region(sites), std::move(m)};
}

Matrix vectorize(const Superoperator& s, std::int64_t dense_cap) {
  const std::int64_t d = s.domain_dim;
  if (d * d > dense_cap)
    throw CapError("vectorize: D^2 = " + std::to_string(d * d) + " exceeds dense cap " +
                   std::to_string(dense_cap) + "; use matrix-free mode");
  Matrix out(d * d, d * d);
  Matrix unit = Matrix::Zero(d, d);
  for (std::int64_t j = 0; j < d; ++j)
    for (std::int64_t i = 0; i < d; ++i) {
      unit(i, j) = 1;
      out.col(i + d * j) = vec(s.apply(unit));
      unit(i, j) = 0;
    }
  return out;
}

}  // namespace gibbslab
