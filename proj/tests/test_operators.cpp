#include <doctest.h>

#include "gibbslab/operators.hpp"
#include "gibbslab/random_states.hpp"
#include "oracle_helpers.hpp"

using namespace gibbslab;

namespace {

Matrix pauli_z() { return Eigen::Vector2cd(1, -1).asDiagonal(); }

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

}  // namespace

TEST_CASE("embed basics") {
  Lattice lat = make_chain(2, 2);
  ChainOp z0{Region({0}), pauli_z()};
  ChainOp full = embed(z0, lat);
  Matrix expect = Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
  CHECK((full.mat - expect).cwiseAbs().maxCoeff() == 0.0);

  ChainOp id1 = identity_op(Region({1}), 2);
  CHECK((embed(id1, lat).mat - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed X on middle site against kron oracle") {
  Lattice lat = make_chain(3, 2);
  ChainOp x1{Region({1}), pauli_x()};
  Matrix expect = oracle::kron2(oracle::kron2(Matrix::Identity(2, 2), pauli_x()),
                                Matrix::Identity(2, 2));
  CHECK((embed(x1, lat).mat - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed with non-contiguous support") {
  StateSampler sampler(3);
  ChainOp op = sampler.hermitian_observable(Region({0, 2}), 2);
  Lattice lat = make_chain(3, 2);
  Matrix expect = oracle::embed_naive(op.mat, {0, 2}, 3, 2);
  CHECK((embed(op, lat).mat - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(embed(op, Region({0, 1}), 2), Error);
}

TEST_CASE("partial trace basics") {
  StateSampler sampler(5);
  ChainOp rho = sampler.hilbert_schmidt(Region({1}), 2);
  ChainOp half = identity_op(Region({0}), 2);
  half.mat *= 0.5;
  ChainOp prod = tensor(half, rho, 2);
  ChainOp back = partial_trace(prod, Region({0}), 2);
  CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-14);

  ChainOp all = partial_trace(prod, prod.support, 2);
  CHECK(all.dim() == 1);
  CHECK(std::abs(all.mat(0, 0) - prod.mat.trace()) < 1e-14);
  CHECK_THROWS_AS(partial_trace(rho, Region({7}), 2), Error);
}

TEST_CASE("partial trace against contraction oracle") {
  StateSampler sampler(7);
  Region full = Region::interval(0, 2);
  ChainOp rho = sampler.hilbert_schmidt(full, 2);
  for (auto traced : {std::vector<int>{1}, std::vector<int>{0, 2}, std::vector<int>{2}}) {
    ChainOp got = partial_trace(rho, Region(traced), 2);
    Matrix expect = oracle::ptrace_naive(rho.mat, {0, 1, 2}, traced, 2);
    CHECK((got.mat - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("partial trace preserves trace and positivity") {
  StateSampler sampler(11);
  for (int i = 0; i < 200; ++i) {
    Region full = Region::interval(0, 2);
    ChainOp rho = (i % 2 == 0) ? sampler.hilbert_schmidt(full, 2) : sampler.bures(full, 2);
    Region traced({i % 3});
    ChainOp red = partial_trace(rho, traced, 2);
    CHECK(std::abs(red.mat.trace().real() - rho.mat.trace().real()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(red.mat, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("embed then trace out the complement recovers d^|c| times the input") {
  StateSampler sampler(13);
  Lattice lat = make_chain(4, 2);
  ChainOp op = sampler.hermitian_observable(Region({1, 2}), 2);
  ChainOp big = embed(op, lat);
  ChainOp back = partial_trace(big, Region({0, 3}), 2);
  CHECK((back.mat - 4.0 * op.mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mod_partial_trace keeps the support") {
  StateSampler sampler(17);
  ChainOp rho = sampler.hilbert_schmidt(Region::interval(0, 2), 2);
  ChainOp m = mod_partial_trace(rho, Region({1}), 2);
  CHECK(m.support == rho.support);
  CHECK(std::abs(m.mat.trace().real() - 2.0) < 1e-12);  // tr rho * d_traced
}

TEST_CASE("matrix functions") {
  Region r({0});
  ChainOp id = identity_op(r, 2);
  CHECK(matrix_function(id, MatrixFn::Log).op.mat.cwiseAbs().maxCoeff() < 1e-15);

  ChainOp four{r, 4.0 * Matrix::Identity(2, 2)};
  CHECK((matrix_function(four, MatrixFn::InvSqrt).op.mat - 0.5 * Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  StateSampler sampler(19);
  ChainOp sigma = sampler.haar_floor(Region::interval(0, 1), 2, 1e-3);
  ChainOp log_s = matrix_function(sigma, MatrixFn::Log).op;
  ChainOp round = matrix_function(log_s, MatrixFn::Exp).op;
  CHECK((round.mat - sigma.mat).cwiseAbs().maxCoeff() < 1e-10);

  ChainOp sq = matrix_function(sigma, MatrixFn::Sqrt).op;
  CHECK((sq.mat * sq.mat - sigma.mat).cwiseAbs().maxCoeff() < 1e-10);

  // singular input: log/inv_sqrt/inverse refuse without clamping
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1;
  ChainOp pure{r, proj};
  CHECK_THROWS_AS(matrix_function(pure, MatrixFn::Log), Error);
  MatrixFnResult clamped = matrix_function(pure, MatrixFn::Log, true);
  CHECK(clamped.clamped);
  CHECK(matrix_function(pure, MatrixFn::Sqrt).clamped == false);
}

TEST_CASE("norms") {
  ChainOp d{Region({0}), Eigen::Vector2cd(3, -4).asDiagonal()};
  Norms n = norms(d);
  CHECK(n.operator_norm == doctest::Approx(4).epsilon(1e-14));
  CHECK(n.trace_norm == doctest::Approx(7).epsilon(1e-14));

  StateSampler sampler(23);
  ChainOp rho = sampler.hilbert_schmidt(Region::interval(0, 1), 2);
  CHECK(norms(rho).trace_norm == doctest::Approx(1).epsilon(1e-12));

  // difference of two states against an SVD oracle
  ChainOp sig = sampler.hilbert_schmidt(Region::interval(0, 1), 2);
  ChainOp diff{rho.support, rho.mat - sig.mat};
  Eigen::JacobiSVD<Matrix> svd(diff.mat);
  CHECK(norms(diff).operator_norm ==
        doctest::Approx(svd.singularValues().maxCoeff()).epsilon(1e-10));
  CHECK(norms(diff).trace_norm == doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
}

TEST_CASE("spectral reconstruction invariant") {
  StateSampler sampler(29);
  ChainOp h = sampler.hermitian_observable(Region::interval(0, 2), 2);
  SpectralDecomposition sd = spectral(h.mat);
  Matrix recon = sd.eigenvectors * sd.eigenvalues.asDiagonal() * sd.eigenvectors.adjoint();
  CHECK((recon - h.mat).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, h.mat.cwiseAbs().maxCoeff()));
  for (int i = 1; i < sd.eigenvalues.size(); ++i)
    CHECK(sd.eigenvalues[i] >= sd.eigenvalues[i - 1]);
}

TEST_CASE("make_hermitian and make_density validate") {
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(make_hermitian(Region({0}), bad, 2), Error);
  Matrix neg = Eigen::Vector2cd(1.5, -0.5).asDiagonal();
  CHECK_THROWS_AS(make_density(Region({0}), neg, 2), Error);
  Matrix off = Eigen::Vector2cd(0.7, 0.7).asDiagonal();
  CHECK_THROWS_AS(make_density(Region({0}), off, 2), Error);
  CHECK_NOTHROW(make_density(Region({0}), Eigen::Vector2cd(0.7, 0.3).asDiagonal(), 2));
}

TEST_CASE("vectorize identity and conjugation superoperators") {
  Superoperator id{4, [](const Matrix& m) { return m; }};
  Matrix l = vectorize(id);
  CHECK((l - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);

  StateSampler sampler(31);
  Matrix a = sampler.ginibre(4);
  Superoperator conj{4, [&a](const Matrix& m) { return (a * m * a.adjoint()).eval(); }};
  Matrix lc = vectorize(conj);
  // column-stacking: vec(A rho A^dagger) = (conj(A) ox A) vec(rho)
  Matrix expect = oracle::kron2(a.conjugate(), a);
  CHECK((lc - expect).cwiseAbs().maxCoeff() < 1e-12);
  for (int probe = 0; probe < 5; ++probe) {
    ChainOp rho = sampler.hilbert_schmidt(Region::interval(0, 1), 2);
    Vector lhs = lc * vec(rho.mat);
    Vector rhs = vec((a * rho.mat * a.adjoint()).eval());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  Superoperator big{128, [](const Matrix& m) { return m; }};
  CHECK_THROWS_AS(vectorize(big), CapError);  // 7 qubits dense
}

TEST_CASE("vec/unvec round trip") {
  StateSampler sampler(37);
  Matrix m = sampler.ginibre(3);
  CHECK((unvec(vec(m), 3) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permute_sites reflection") {
  StateSampler sampler(41);
  Lattice lat = make_chain(3, 2);
  ChainOp op = sampler.hermitian_observable(Region({0, 1}), 2);
  auto reflect = [&lat](int s) { return lat.n_sites - 1 - s; };
  ChainOp moved = permute_sites(op, reflect, 2);
  CHECK(moved.support == Region({1, 2}));
  // reflecting twice restores the operator
  ChainOp back = permute_sites(moved, reflect, 2);
  CHECK((back.mat - op.mat).cwiseAbs().maxCoeff() < 1e-15);
  // single-site case against direct embedding
  ChainOp z2 = permute_sites(ChainOp{Region({0}), pauli_z()}, reflect, 2);
  CHECK(z2.support == Region({2}));
  CHECK((embed(z2, lat).mat -
         oracle::embed_naive(pauli_z(), {2}, 3, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("superoperator verification") {
  StateSampler sampler(47);
  Matrix a = sampler.ginibre(4);
  Superoperator conj{4, [&a](const Matrix& m) { return (a * m * a.adjoint()).eval(); }};
  Matrix dense = vectorize(conj);
  SuperoperatorCheck ok = verify_superoperator(conj, &dense, 20, 1);
  CHECK(ok.pass);
  CHECK(ok.linearity_residual <= 1e-10);
  CHECK(ok.dense_residual <= 1e-10);

  // a deliberately nonlinear map fails the linearity probe
  Superoperator sq{4, [](const Matrix& m) { return (m * m).eval(); }};
  CHECK_FALSE(verify_superoperator(sq, nullptr, 20, 1).pass);
}

TEST_CASE("operator file round trip") {
  StateSampler sampler(53);
  ChainOp op = sampler.hermitian_observable(Region({0, 2}), 2);
  save_operator(op, "/tmp/gibbslab_test_op.txt");
  ChainOp back = load_operator("/tmp/gibbslab_test_op.txt");
  CHECK(back.support == op.support);
  CHECK((back.mat - op.mat).cwiseAbs().maxCoeff() == 0.0);  // 17 digits round-trip
  CHECK_THROWS_AS(load_operator("/tmp/gibbslab_no_such_file.txt"), Error);
}

TEST_CASE("tensor of disjoint supports") {
  StateSampler sampler(43);
  ChainOp a = sampler.hilbert_schmidt(Region({0}), 2);
  ChainOp b = sampler.hilbert_schmidt(Region({2}), 2);
  ChainOp t = tensor(a, b, 2);
  CHECK(t.support == Region({0, 2}));
  CHECK((t.mat - oracle::kron2(a.mat, b.mat)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(tensor(a, a, 2), Error);
}
