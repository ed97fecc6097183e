#include <gtest/gtest.h>

#include <cmath>

#include "kbody/errors.hpp"
#include "kbody/quantum_state.hpp"
#include "test_support.hpp"

using namespace kbody;

TEST(PureState, NormalizationContract) {
  Vector v = Vector::Zero(4);
  v(0) = 2.0;
  EXPECT_THROW(PureState{v}, ContractViolation);
  EXPECT_NEAR(PureState::normalized(v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(PureState::normalized(Vector::Ones(6)), DimensionError);
  EXPECT_THROW(PureState::normalized(Vector::Zero(4)), ContractViolation);
}

TEST(DensityMatrix, ContractChecks) {
  EXPECT_THROW(DensityMatrix(HermitianMatrix::identity(4)), ContractViolation);
  EXPECT_THROW(DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector4d(1.2, -0.2, 0, 0))), ContractViolation);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(3));
}

TEST(PartialTrace, MatchesNumpyOracle) {
  const auto data = test_support::load_data("numeric_oracles.json");
  const Matrix rho = test_support::matrix_from_json(data["rho4"]);
  for (const auto& c : data["partial_traces"]) {
    const auto keep = c["keep"].get<std::vector<int>>();
    EXPECT_LT((partial_trace(rho, 4, 2, keep) - test_support::matrix_from_json(c["reduced"])).norm(), 1e-13)
        << c["keep"].dump();
  }
  EXPECT_THROW(partial_trace(rho, 4, 2, {}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, 4, 2, {1, 1}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, 4, 2, {4}), ArgumentError);
}

TEST(Entropies, MatchNumpyOracle) {
  const auto data = test_support::load_data("numeric_oracles.json");
  const DensityMatrix rho(HermitianMatrix(test_support::matrix_from_json(data["rho4"])));
  const DensityMatrix sigma(HermitianMatrix(test_support::matrix_from_json(data["sigma4"])));
  EXPECT_NEAR(von_neumann_entropy(rho), data["von_neumann_rho4"].get<double>(), 1e-11);
  EXPECT_NEAR(relative_entropy(rho, sigma), data["relative_entropy_rho4_sigma4"].get<double>(), 1e-10);
  EXPECT_NEAR(trace_distance(rho, sigma), data["trace_distance_rho4_sigma4"].get<double>(), 1e-12);
}

TEST(Entropies, SupportViolationIsInfinite) {
  const DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(1, 0));
  const DensityMatrix one = DensityMatrix::from_pure(PureState::basis(1, 1));
  EXPECT_TRUE(std::isinf(relative_entropy(zero, one)));
  EXPECT_NEAR(relative_entropy(zero, DensityMatrix::maximally_mixed(1)), std::log(2.0), 1e-14);
}

TEST(RandomStates, SeededAndReproducible) {
  const PureState a = haar_random_pure(3, 2, std::uint64_t{42});
  const PureState b = haar_random_pure(3, 2, std::uint64_t{42});
  EXPECT_EQ(a.amplitudes(), b.amplitudes());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(RandomStates, HaarFirstMomentIsUniform) {
  // E[|psi><psi|] = 1/D for Haar states.
  Rng rng(17);
  Matrix mean = Matrix::Zero(4, 4);
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const Vector v = haar_random_pure(2, 2, rng).amplitudes();
    mean += v * v.adjoint();
  }
  mean /= samples;
  EXPECT_LT((mean - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 0.01);
}

TEST(GhzState, Fidelities) {
  const PureState ghz = ghz_state(3);
  Matrix gamma = Matrix::Zero(8, 8);
  gamma(0, 0) = gamma(7, 7) = 0.5;
  EXPECT_NEAR(fidelity_pure(gamma, ghz.amplitudes()), 0.5, 1e-15);
  const DensityMatrix r = partial_trace(DensityMatrix::from_pure(ghz), {0, 1});
  EXPECT_NEAR(r.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(r.matrix()(0, 3)), 0.0, 1e-15);
}
