#pragma once

#include <random>

#include "gibbslab/gibbs.hpp"

namespace gibbslab {

// Seeded ensembles used by the certification suites.  Every draw is a pure
// function of the stream state, so a fixed seed reproduces a run exactly.
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  Matrix ginibre(std::int64_t n);
  Matrix haar_unitary(std::int64_t n);

  // rho = G G^dagger / tr (Hilbert-Schmidt measure)
  ChainOp hilbert_schmidt(const Region& support, int local_dim);
  // rho = (1+U) G G^dagger (1+U^dagger) / tr (Bures measure)
  ChainOp bures(const Region& support, int local_dim);
  // (1-eps) sigma + eps * HS-sample
  ChainOp near_state(const ChainOp& sigma, double eps, int local_dim);
  // Haar-conjugated random diagonal with probabilities floored at `floor`
  ChainOp haar_floor(const Region& support, int local_dim, double floor = 1e-6);
  // random classical (diagonal) state
  ChainOp diagonal_state(const Region& support, int local_dim, double floor = 0.0);
  // GUE-style Hermitian observable, operator norm ~ 1
  ChainOp hermitian_observable(const Region& support, int local_dim);

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Mix with the maximally mixed state so logs stay finite.
ChainOp floor_state(const ChainOp& rho, double floor);

}  // namespace gibbslab
