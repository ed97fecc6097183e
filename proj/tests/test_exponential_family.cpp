#include <gtest/gtest.h>

#include <cmath>

#include "kbody/errors.hpp"
#include "kbody/exponential_family.hpp"
#include "kbody/graph_state.hpp"

using namespace kbody;

TEST(Hamiltonian, LocalityEnforced) {
  KLocalHamiltonian h(3, 2);
  EXPECT_NO_THROW(h.add_term(PauliString::parse("XZI"), 0.5));
  EXPECT_THROW(h.add_term(PauliString::parse("XZY"), 0.5), ArgumentError);
  EXPECT_THROW(KLocalHamiltonian(3, 4), ArgumentError);
}

TEST(Hamiltonian, JsonRoundTrip) {
  const std::string text = R"([{"pauli": "ZZI", "coeff": 1.5}, {"pauli": "IXI", "coeff": -0.25}])";
  const KLocalHamiltonian h = KLocalHamiltonian::from_json(text);
  EXPECT_EQ(h.locality(), 2);
  EXPECT_DOUBLE_EQ(h.terms().coefficient(PauliString::parse("ZZI")), 1.5);
  EXPECT_EQ(KLocalHamiltonian::from_json(h.to_json()).terms().max_abs_difference(h.terms()), 0.0);
  EXPECT_THROW(KLocalHamiltonian::from_json("[{\"pauli\": 3}]"), ArgumentError);
  EXPECT_THROW(KLocalHamiltonian::from_json("not json"), ArgumentError);
  EXPECT_THROW(KLocalHamiltonian::from_json(text, 1), ArgumentError);
}

TEST(ThermalState, TrivialCases) {
  EXPECT_LT((thermal_state(KLocalHamiltonian(3, 2)).matrix() - Matrix::Identity(8, 8) / 8.0).norm(), 1e-15);
  KLocalHamiltonian h(1, 1);
  h.add_term(PauliString::parse("Z"), -3.0);  // favours |1>, the -1 eigenvector of Z
  const Matrix tau = thermal_state(h).matrix();
  EXPECT_NEAR(tau(1, 1).real(), std::exp(3.0) / (std::exp(3.0) + std::exp(-3.0)), 1e-14);
  KLocalHamiltonian huge(2, 1);
  huge.add_term(PauliString::parse("ZI"), 800.0);  // would overflow without the spectral shift
  EXPECT_NEAR(thermal_state(huge).matrix()(0, 0).real(), 0.5, 1e-14);
}

TEST(ThermalState, IdentityTermIsIrrelevant) {
  Rng rng(1);
  KLocalHamiltonian h = KLocalHamiltonian::random(3, 2, 1.0, rng);
  KLocalHamiltonian shifted = h;
  shifted.add_term(PauliString(3), 4.0);
  EXPECT_LT((thermal_state(h).matrix() - thermal_state(shifted).matrix()).norm(), 1e-13);
  EXPECT_LT((thermal_state(shifted.traceless()).matrix() - thermal_state(h).matrix()).norm(), 1e-13);
}

TEST(Coordinates, LegendreIdentity) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const ExponentialCoordinates c = exponential_coordinates(KLocalHamiltonian::random(4, 2, 0.8, rng));
    EXPECT_LE(c.legendre_residual(), 1e-7);
  }
}

TEST(Coordinates, MassieuGradientMatchesFiniteDifferences) {
  Rng rng(3);
  const auto basis = coordinate_basis(3, 2);
  std::normal_distribution<double> normal(0.0, 0.7);
  std::vector<double> theta(basis.size());
  for (double& t : theta) t = normal(rng);
  std::vector<double> grad;
  massieu(3, basis, theta, &grad);
  const double h = 1e-5;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto up = theta;
    auto down = theta;
    up[i] += h;
    down[i] -= h;
    const double fd = (massieu(3, basis, up) - massieu(3, basis, down)) / (2 * h);
    EXPECT_LE(std::abs(fd - grad[i]), 1e-5 * std::max(1.0, std::abs(grad[i]))) << basis[i].to_string();
  }
}

TEST(InfoProjection, GhzGivesClassicalMixture) {
  const InfoProjection p = info_projection(DensityMatrix::from_pure(ghz_state(3)), 2);
  Matrix gamma = Matrix::Zero(8, 8);
  gamma(0, 0) = gamma(7, 7) = 0.5;
  EXPECT_TRUE(p.converged);
  EXPECT_LE(trace_distance(p.state.matrix(), gamma), 1e-4);
}

TEST(InfoProjection, RingClusterGivesMaximallyMixed) {
  const InfoProjection p = info_projection(DensityMatrix::from_pure(ring_cluster(5).state_vector()), 2);
  EXPECT_LE(trace_distance(p.state.matrix(), Matrix::Identity(32, 32) / 32.0), 1e-10);
}

TEST(InfoProjection, FixedPointOnThermalStates) {
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix tau = thermal_state(KLocalHamiltonian::random(4, 2, 0.8, rng));
    const InfoProjection p = info_projection(tau, 2);
    EXPECT_LE(trace_distance(p.state, tau), 1e-4);
  }
}

TEST(InfoProjection, MatchesMarginalsAndRaisesEntropy) {
  Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = random_mixed_state(4, 2, rng);
    const InfoProjection p = info_projection(rho, 2);
    ASSERT_TRUE(p.converged);
    EXPECT_LE(PauliExpansion::expand(p.state.matrix())
                  .project(2)
                  .max_abs_difference(PauliExpansion::expand(rho.matrix()).project(2)),
              1e-6);
    EXPECT_GE(von_neumann_entropy(p.state), von_neumann_entropy(rho) - 1e-6);
  }
}

TEST(Pythagorean, ResidualSmall) {
  EXPECT_LE(pythagorean_residual(DensityMatrix::from_pure(ghz_state(3)), 2, DensityMatrix::maximally_mixed(3)),
            1e-4);
  Rng rng(6);
  const DensityMatrix tau = thermal_state(KLocalHamiltonian::random(4, 2, 0.5, rng));
  EXPECT_LE(pythagorean_residual(tau, 2, tau), 1e-8);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = random_mixed_state(4, 2, rng);
    const DensityMatrix t = thermal_state(KLocalHamiltonian::random(4, 2, 0.7, rng));
    EXPECT_LE(pythagorean_residual(rho, 2, t), 1e-4);
  }
}

TEST(OverlapBound, ClosedForm) {
  EXPECT_EQ(overlap_bound(32.0), 31.0 / 32.0);
  EXPECT_EQ(overlap_bound(64.0), 63.0 / 64.0);
  EXPECT_THROW(overlap_bound(1.0), ArgumentError);
}

TEST(FourVariable, ObjectiveAndConstraints) {
  EXPECT_NEAR(four_variable_objective(1.0, 0.0, 0.0, 0.0, 32.0), 1.0 / 32.0, 1e-15);
  EXPECT_NEAR(four_variable_reduced(0.0, 0.0, 8.0), 1.0 / 8.0, 1e-15);
  EXPECT_THROW(four_variable_objective(0.7, 0.7, 1.0, -1.0, 8.0), ArgumentError);
  EXPECT_THROW(four_variable_objective(0.5, 0.5, 1.0, -2.0, 8.0), ArgumentError);
  EXPECT_THROW(four_variable_objective(-0.1, 0.5, 1.0, 0.2, 8.0), ArgumentError);
  const double v = four_variable_objective(2.0 / 3.0, 1.0 / 3.0, 1.0, -2.0, 8.0);
  const double num = 2.0 / 3.0 * std::exp(1.0) + 1.0 / 3.0 * std::exp(-2.0);
  const double den = std::exp(1.0) + std::exp(-2.0) + 6.0 * std::exp(1.0 / 6.0);
  EXPECT_NEAR(v, num / den, 1e-15);
  EXPECT_NEAR(four_variable_reduced(1.0, -2.0, 8.0), v, 1e-15);
}

TEST(FourVariable, RandomPointsRespectBound) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  for (double dim : {8.0, 32.0, 64.0}) {
    for (int i = 0; i < 2000; ++i) {
      const double ep = std::exp(u(rng));
      const double em = -std::exp(u(rng));
      const double scale = s(rng);
      const double pm = scale * ep / (ep - em);
      const double pp = scale - pm;
      EXPECT_LE(four_variable_objective(pp, pm, ep, em, dim), (dim - 1.0) / dim);
    }
    const FourVariableMaximum best = maximize_four_variable(dim);
    EXPECT_LE(best.value, (dim - 1.0) / dim + 1e-9);
    EXPECT_GT(best.value, (dim - 1.0) / dim - 1e-3);
  }
}

TEST(OverlapAscent, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  const PureState psi = haar_random_pure(3, 2, rng);
  const auto basis = coordinate_basis(3, 2);
  std::normal_distribution<double> normal(0.0, 0.8);
  std::vector<double> theta(basis.size());
  for (double& t : theta) t = normal(rng);
  std::vector<double> grad;
  thermal_fidelity(psi, basis, theta, &grad);
  const double h = 1e-5;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto up = theta;
    auto down = theta;
    up[i] += h;
    down[i] -= h;
    const double fd = (thermal_fidelity(psi, basis, up) - thermal_fidelity(psi, basis, down)) / (2 * h);
    EXPECT_NEAR(fd, grad[i], 1e-7) << basis[i].to_string();
  }
}

TEST(OverlapAscent, ProductStateIsApproached) {
  OverlapAscentOptions o;
  o.restarts = 2;
  EXPECT_GE(overlap_ascent(PureState::basis(3, 0), 1, o).best_fidelity, 1.0 - 1e-3);
}

TEST(OverlapAscent, RingClusterStaysBelowBound) {
  OverlapAscentOptions o;
  o.restarts = 3;
  o.iterations = 800;
  const OverlapAscentResult r = overlap_ascent(ring_cluster(5).state_vector(), 2, o);
  EXPECT_LE(r.best_fidelity, 31.0 / 32.0 + 1e-6);
  EXPECT_GT(r.best_fidelity, 1.0 / 32.0);
}

TEST(OverlapAscent, HierarchyIsMonotone) {
  OverlapAscentOptions o;
  o.restarts = 2;
  o.iterations = 400;
  const PureState psi = haar_random_pure(4, 2, std::uint64_t{12});
  const OverlapAscentResult k1 = overlap_ascent(psi, 1, o);
  const OverlapAscentResult k2 = overlap_ascent_from(psi, 2, k1.hamiltonian, o);
  const OverlapAscentResult k3 = overlap_ascent_from(psi, 3, k2.hamiltonian, o);
  EXPECT_GE(k2.best_fidelity, k1.best_fidelity - 1e-12);
  EXPECT_GE(k3.best_fidelity, k2.best_fidelity - 1e-12);
}
