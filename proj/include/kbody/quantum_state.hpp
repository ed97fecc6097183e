#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kbody/linalg.hpp"

namespace kbody {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for trial `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Pure state of N particles with local dimension d (D = d^N amplitudes).
class PureState {
 public:
  PureState() = default;
  /// Requires unit norm within 1e-12.
  PureState(Vector amplitudes, int local_dim = 2);
  /// Rescales to unit norm; throws ContractViolation for the zero vector.
  static PureState normalized(Vector amplitudes, int local_dim = 2);
  static PureState basis(int n_particles, std::uint64_t index, int local_dim = 2);

  const Vector& amplitudes() const noexcept { return amps_; }
  int local_dim() const noexcept { return d_; }
  int n_particles() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
  int d_ = 2;
  int n_ = 0;
};

/// Hermitian, unit trace (1e-10), smallest eigenvalue >= -1e-9.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-9;

  DensityMatrix() = default;
  explicit DensityMatrix(HermitianMatrix m, int local_dim = 2);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_particles, int local_dim = 2);
  /// Clips eigenvalues below zero and renormalizes. For numerically noisy
  /// states produced by solvers.
  static DensityMatrix clipped(const Matrix& m, int local_dim = 2);

  const HermitianMatrix& hermitian() const noexcept { return m_; }
  const Matrix& matrix() const noexcept { return m_.matrix(); }
  int local_dim() const noexcept { return d_; }
  int n_particles() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return m_.dim(); }

 private:
  HermitianMatrix m_;
  int d_ = 2;
  int n_ = 0;
};

/// Integer N with d^N == dim; throws DimensionError otherwise.
int particle_count(Eigen::Index dim, int local_dim);

/// Reduced state on the particles in `keep` (0-based, any order; the result
/// orders them ascending). Throws ArgumentError for empty, repeated, or
/// out-of-range indices.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
Matrix partial_trace(const Matrix& rho, int n_particles, int local_dim, const std::vector<int>& keep);

/// <psi| rho |psi>.
double fidelity_pure(const DensityMatrix& rho, const PureState& psi);
double fidelity_pure(const Matrix& rho, const Vector& psi);

/// (1/2) sum |eigenvalues of rho - sigma|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Von Neumann entropy in nats; eigenvalues below 1e-14 contribute zero.
double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_spectrum(const RealVector& eigenvalues);

/// S(rho || sigma) in nats. Returns +infinity when rho has weight outside the
/// support of sigma (sigma eigenvalue <= 1e-14 where rho has weight > 1e-12).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Haar-random pure state: normalized vector of i.i.d. standard complex Gaussians.
PureState haar_random_pure(int n_particles, int local_dim, Rng& rng);
PureState haar_random_pure(int n_particles, int local_dim, std::uint64_t seed);

/// Random full-rank mixed state G G^dagger / tr from a Ginibre matrix.
DensityMatrix random_mixed_state(int n_particles, int local_dim, Rng& rng);

/// (|0...0> + e^{i alpha} |1...1>) / sqrt 2 on n qubits.
PureState ghz_state(int n_qubits, double alpha = 0.0);

}  // namespace kbody
