#include <gtest/gtest.h>

#include "kbody/errors.hpp"
#include "kbody/graph_state.hpp"
#include "kbody/sdp.hpp"
#include "test_support.hpp"

using namespace kbody;

namespace {

Matrix random_state_matrix(int n, Rng& rng) { return random_mixed_state(n, 2, rng).matrix(); }

}  // namespace

TEST(ConstraintScope, ResolvesExpectedStrings) {
  EXPECT_EQ(ConstraintScope::all_up_to_weight().resolve(5, 2).size(), 106u);
  EXPECT_EQ(ConstraintScope::chain(4, 1).resolve(4, 2).size(), 1u + 12u + 3u * 9u);
  EXPECT_EQ(ConstraintScope::chain(4, 2).resolve(4, 2).size(), 1u + 12u + 5u * 9u);
  const auto explicit_scope = ConstraintScope::explicit_strings({PauliString::parse("ZZ")});
  EXPECT_EQ(explicit_scope.resolve(2, 2).size(), 2u);
  EXPECT_THROW(ConstraintScope::chain(4, 0), ArgumentError);
}

TEST(ProjectAffine, IdempotentAndExact) {
  Rng rng(1);
  const PureState psi = haar_random_pure(3, 2, rng);
  const MarginalProgram program{psi, 2, 0.0};
  const Matrix x = test_support::random_hermitian(8, rng);
  const Matrix p = project_affine(x, program);
  EXPECT_LT((project_affine(p, program) - p).norm(), 1e-14);
  const PauliExpansion target = PauliExpansion::expand(psi.amplitudes() * psi.amplitudes().adjoint()).project(2);
  EXPECT_LT(PauliExpansion::expand(p).project(2).max_abs_difference(target), 1e-14);
  // Free (weight-3) coefficients are untouched.
  for (const auto& s : strings_up_to_weight(3, 3))
    if (s.weight() == 3) EXPECT_NEAR(pauli_coefficient(p, s), pauli_coefficient(x, s), 1e-14);
  // Zero maps to exactly the fixed part.
  EXPECT_LT((project_affine(Matrix::Zero(8, 8), program) - target.to_dense()).norm(), 1e-14);
}

TEST(ProjectAffine, IsOrthogonalProjection) {
  // <x - P(x), a - P(x)> = 0 for any a in the affine set.
  Rng rng(2);
  const MarginalProgram program{haar_random_pure(3, 2, rng), 1, 0.0};
  const Matrix x = test_support::random_hermitian(8, rng);
  const Matrix p = project_affine(x, program);
  for (int i = 0; i < 20; ++i) {
    const Matrix a = project_affine(test_support::random_hermitian(8, rng), program);
    EXPECT_NEAR((x - p).cwiseProduct((a - p).conjugate()).sum().real(), 0.0, 1e-10);
  }
}

TEST(ProjectCone, SimpleCases) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 2.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 1) = 2.0;
  EXPECT_LT((project_cone_shifted(d, 0.0) - expected).norm(), 1e-15);
  Rng rng(3);
  const Matrix rho = random_state_matrix(2, rng) + Matrix::Identity(4, 4);
  EXPECT_LT((project_cone_shifted(rho, 0.5) - rho).norm(), 1e-12);
}

TEST(ProjectCone, SampledOptimality) {
  Rng rng(4);
  const Matrix x = test_support::random_hermitian(4, rng);
  const double delta = 0.1;
  const Matrix p = project_cone_shifted(x, delta);
  EXPECT_GE(eigvals_lapack(p)(0), delta - 1e-12);
  const double best = (x - p).norm();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const Matrix q = project_cone_shifted(p + 0.05 * test_support::random_hermitian(4, rng), delta);
    ASSERT_GE((x - q).norm(), best - 1e-12);
  }
}

TEST(Solve, RingClusterFeasibleAtOneOverD) {
  const MarginalProgram program{ring_cluster(5).state_vector(), 2, 1.0 / 32.0};
  const SdpOutcome r = solve(program);
  ASSERT_EQ(r.status, SdpStatus::Feasible);
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_LT((*r.solution - Matrix::Identity(32, 32) / 32.0).norm(), 1e-12);
  EXPECT_LE(r.affine_residual, 1e-9);
  EXPECT_LE(r.cone_residual, 1e-9);
}

TEST(Solve, TriviallyInfeasibleAboveOneOverD) {
  const SdpOutcome r = solve(MarginalProgram{ring_cluster(5).state_vector(), 2, 0.05});
  EXPECT_EQ(r.status, SdpStatus::InfeasibleNumerical);
}

TEST(Solve, Errors) {
  EXPECT_THROW(solve(MarginalProgram{ghz_state(3), 2, -1e-3}), ContractViolation);
  Vector big = Vector::Zero(Eigen::Index{1} << 13);
  big(0) = 1.0;
  EXPECT_THROW(solve(MarginalProgram{PureState(big), 2, 1e-3}), ResourceError);
  SolverOptions dykstra;
  dykstra.method = SplittingMethod::Dykstra;
  EXPECT_THROW(solve(MarginalProgram{ghz_state(3), 2, 0.0, ConstraintScope::all_up_to_weight(), true}, dykstra),
               ArgumentError);
}

TEST(Solve, Deterministic) {
  const PureState psi = haar_random_pure(4, 2, std::uint64_t{8});
  const MarginalProgram program{psi, 1, 1e-3};
  const SdpOutcome a = solve(program);
  const SdpOutcome b = solve(program);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.status, b.status);
  ASSERT_EQ(a.solution.has_value(), b.solution.has_value());
  if (a.solution) EXPECT_EQ(*a.solution, *b.solution);
}

TEST(Solve, FeasibleSolutionsSatisfyConstraints) {
  const PureState psi = haar_random_pure(4, 2, std::uint64_t{9});
  const MarginalProgram program{psi, 1, 1e-3};
  const SdpOutcome r = solve(program);
  ASSERT_EQ(r.status, SdpStatus::Feasible);
  EXPECT_GE(eigvals_lapack(*r.solution)(0), 1e-3 - 1e-9);
  EXPECT_LE(AffineConstraints::from_program(program).max_residual(*r.solution), 1e-9);
}

TEST(Solve, DykstraReachesInteriorPoint) {
  SolverOptions dykstra;
  dykstra.method = SplittingMethod::Dykstra;
  const PureState psi = haar_random_pure(3, 2, std::uint64_t{10});
  const SdpOutcome r = solve(MarginalProgram{psi, 1, 1e-2}, dykstra);
  ASSERT_EQ(r.status, SdpStatus::Feasible);
  EXPECT_LE(r.affine_residual, 1e-9);
  EXPECT_LE(r.cone_residual, 1e-9);
}

TEST(Solve, ObjectiveMatchesReferenceSolver) {
  const auto cases = test_support::load_data("sdp_objective_n3.json");
  for (const auto& c : cases) {
    const PureState psi = PureState::normalized(test_support::vector_from_json(c["amps"]));
    const MarginalProgram program{psi, c["k"].get<int>(), c["delta"].get<double>(),
                                  ConstraintScope::all_up_to_weight(), true};
    const SdpOutcome r = solve(program);
    ASSERT_EQ(r.status, SdpStatus::Feasible) << c["name"];
    EXPECT_NEAR(r.objective, c["min_overlap"].get<double>(), 1e-4) << c["name"];
    EXPECT_GE(eigvals_lapack(*r.solution)(0), program.delta - 1e-8) << c["name"];
  }
}

TEST(Solve, GhzObjectiveBelowHalf) {
  const SdpOutcome r = solve(MarginalProgram{ghz_state(3), 2, 0.0, ConstraintScope::all_up_to_weight(), true});
  ASSERT_EQ(r.status, SdpStatus::Feasible);
  EXPECT_LE(r.objective, 0.5 + 1e-9);
}

TEST(Solve, FeasibilityMatchesReferenceLambda) {
  // The program is feasible at delta iff delta <= lambda*, computed by an
  // interior-point reference. Probe with a margin on either side.
  const auto cases = test_support::load_data("lambda_star_n5.json");
  int checked = 0;
  for (const auto& c : cases) {
    if (checked == 10) break;
    const double lam = c["lambda_star"].get<double>();
    const PureState psi = PureState::normalized(test_support::vector_from_json(c["amps"]));
    if (lam > 2e-6) {
      EXPECT_EQ(solve(MarginalProgram{psi, 2, 0.5 * lam}).status, SdpStatus::Feasible) << lam;
      EXPECT_EQ(solve(MarginalProgram{psi, 2, 2.0 * lam}).status, SdpStatus::InfeasibleNumerical) << lam;
      ++checked;
    } else if (lam < 1e-8) {
      EXPECT_EQ(solve(MarginalProgram{psi, 2, 1e-6}).status, SdpStatus::InfeasibleNumerical) << lam;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 10);
}
