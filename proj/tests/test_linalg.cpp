#include <gtest/gtest.h>

#include "kbody/errors.hpp"
#include "kbody/linalg.hpp"
#include "test_support.hpp"

using namespace kbody;

TEST(HermitianMatrix, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, 1.0);
  EXPECT_THROW(HermitianMatrix{m}, ContractViolation);
  EXPECT_THROW(HermitianMatrix{Matrix::Zero(2, 3)}, DimensionError);
  m(1, 0) = Complex(0.0, -1.0);
  EXPECT_NO_THROW(HermitianMatrix{m});
}

TEST(Eigen, LapackAndJacobiAgreeWithNumpy) {
  const auto data = test_support::load_data("numeric_oracles.json");
  const HermitianMatrix h(test_support::matrix_from_json(data["herm6"]));
  for (EigenBackend backend : {EigenBackend::Lapack, EigenBackend::Jacobi}) {
    const EigenDecomposition e = eig_hermitian(h, backend);
    for (Eigen::Index i = 0; i < 6; ++i) {
      EXPECT_NEAR(e.values(i), data["herm6_eigenvalues"][static_cast<std::size_t>(i)].get<double>(), 1e-12);
    }
    EXPECT_LT((h.matrix() * e.vectors - e.vectors * e.values.cast<Complex>().asDiagonal()).norm(), 1e-11);
    EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(6, 6)).norm(), 1e-11);
  }
}

TEST(Eigen, JacobiHandlesDegenerateSpectrum) {
  // Projector spectrum {0 (x3), 1}: every cluster in the embedding is degenerate.
  Vector v(4);
  v << Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(-0.5, 0.0), Complex(0.0, -0.5);
  const Matrix p = v * v.adjoint();
  const EigenDecomposition e = eig_jacobi(p);
  EXPECT_NEAR(e.values(3), 1.0, 1e-12);
  EXPECT_NEAR(e.values(0), 0.0, 1e-12);
  EXPECT_LT((p * e.vectors - e.vectors * e.values.cast<Complex>().asDiagonal()).norm(), 1e-11);
}

TEST(Eigen, RealEmbeddingRoundTrip) {
  Rng rng(5);
  const Matrix h = test_support::random_hermitian(5, rng);
  const RealMatrix r = real_embedding(h);
  EXPECT_LT((r - r.transpose()).norm(), 1e-15);
  EXPECT_LT((from_real_embedding(r) - h).norm(), 1e-15);
}

TEST(SpectralFunctions, ExpAndLogMatchScipy) {
  const auto data = test_support::load_data("numeric_oracles.json");
  const HermitianMatrix h(test_support::matrix_from_json(data["herm6"]));
  const Matrix expected_exp = test_support::matrix_from_json(data["herm6_exp"]);
  EXPECT_LT((exp_hermitian(h).matrix() - expected_exp).norm() / expected_exp.norm(), 1e-12);
  const HermitianMatrix pd(test_support::matrix_from_json(data["pd6"]));
  EXPECT_LT((log_pd(pd).matrix() - test_support::matrix_from_json(data["pd6_log"])).norm(), 1e-10);
  EXPECT_LT((exp_hermitian(log_pd(pd)).matrix() - pd.matrix()).norm(), 1e-10);
}

TEST(SpectralFunctions, LogRejectsSingular) {
  EXPECT_THROW(log_pd(HermitianMatrix::diagonal(RealVector::Unit(3, 0))), DomainError);
}
