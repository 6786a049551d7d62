#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gibbslab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Hilbert-space dimension of the full chain must stay below this unless the
// caller raises the cap; dense eigensolves past a few thousand are hopeless.
inline constexpr std::int64_t kDefaultDimCap = 4096;

// Dense superoperator matrices live on dimension D^2; cap that product.
inline constexpr std::int64_t kDefaultDenseCap = 4096;

// Eigenvalues below this are treated as zero when taking logs / inverses.
inline constexpr double kEpsFloor = 1e-14;

struct Tolerances {
  double herm = 1e-12;       // Hermiticity defect
  double psd = 1e-10;        // allowed negative eigenvalue of a state
  double trace = 1e-10;      // |tr - 1|
  double lin = 1e-10;        // superoperator linearity / dense-vs-apply
  double eig = 1e-10;        // spectral reconstruction
  double comm = 1e-10;       // potential commutation gate
  double ssa = 1e-9;         // strong subadditivity slack
  double cre = 1e-9;         // conditional relative entropy non-negativity
  double qmc = 1e-8;         // quantum Markov chain log defect
  double ep = 1e-9;          // entropy production non-negativity
  double eps_floor = kEpsFloor;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested dense object exceeds a dimension cap (CLI exit code 2).
class CapError : public Error {
 public:
  using Error::Error;
};

// Bad experiment configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace gibbslab
