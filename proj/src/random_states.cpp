#include "gibbslab/random_states.hpp"

namespace gibbslab {

Matrix StateSampler::ginibre(std::int64_t n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng_), gauss(rng_));
  return g;
}

Matrix StateSampler::haar_unitary(std::int64_t n) {
  Matrix g = ginibre(n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix phases so the distribution is Haar
  for (std::int64_t i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0));
  }
  return q;
}

ChainOp StateSampler::hilbert_schmidt(const Region& support, int local_dim) {
  std::int64_t n = ipow(local_dim, support.size());
  Matrix g = ginibre(n);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {support, std::move(rho)};
}

ChainOp StateSampler::bures(const Region& support, int local_dim) {
  std::int64_t n = ipow(local_dim, support.size());
  Matrix g = ginibre(n);
  Matrix u = haar_unitary(n);
  Matrix m = (Matrix::Identity(n, n) + u) * g;
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return {support, std::move(rho)};
}

ChainOp StateSampler::near_state(const ChainOp& sigma, double eps, int local_dim) {
  ChainOp pert = hilbert_schmidt(sigma.support, local_dim);
  return {sigma.support, (1 - eps) * sigma.mat + eps * pert.mat};
}

ChainOp StateSampler::haar_floor(const Region& support, int local_dim, double floor) {
  std::int64_t n = ipow(local_dim, support.size());
  std::exponential_distribution<double> expo(1.0);
  RealVector p(n);
  double z = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    p[i] = expo(rng_);  // flat Dirichlet weights
    z += p[i];
  }
  p /= z;
  for (std::int64_t i = 0; i < n; ++i) p[i] = std::max(p[i], floor);
  p /= p.sum();
  Matrix u = haar_unitary(n);
  return {support, u * p.cast<Complex>().asDiagonal() * u.adjoint()};
}

ChainOp StateSampler::diagonal_state(const Region& support, int local_dim, double floor) {
  std::int64_t n = ipow(local_dim, support.size());
  std::exponential_distribution<double> expo(1.0);
  RealVector p(n);
  for (std::int64_t i = 0; i < n; ++i) p[i] = expo(rng_) + floor;
  p /= p.sum();
  Matrix m = p.cast<Complex>().asDiagonal();
  return {support, std::move(m)};
}

ChainOp StateSampler::hermitian_observable(const Region& support, int local_dim) {
  std::int64_t n = ipow(local_dim, support.size());
  Matrix g = ginibre(n);
  Matrix h = (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
  return {support, std::move(h)};
}

ChainOp floor_state(const ChainOp& rho, double floor) {
  std::int64_t n = rho.dim();
  Matrix out = (1.0 - floor) * rho.mat + (floor / static_cast<double>(n)) * Matrix::Identity(n, n);
  return {rho.support, std::move(out)};
}

}  // namespace gibbslab
