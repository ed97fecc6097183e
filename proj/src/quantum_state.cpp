#include "kbody/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kbody/errors.hpp"

namespace kbody {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int particle_count(Eigen::Index dim, int local_dim) {
  if (local_dim < 2) throw ArgumentError("local dimension must be >= 2");
  int n = 0;
  Eigen::Index p = 1;
  while (p < dim) {
    p *= local_dim;
    ++n;
  }
  if (p != dim || n == 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a positive power of " +
                         std::to_string(local_dim));
  }
  return n;
}

PureState::PureState(Vector amplitudes, int local_dim)
    : amps_(std::move(amplitudes)), d_(local_dim), n_(particle_count(amps_.size(), local_dim)) {
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ContractViolation("pure state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(Vector amplitudes, int local_dim) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ContractViolation("cannot normalize the zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes), local_dim);
}

PureState PureState::basis(int n_particles, std::uint64_t index, int local_dim) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n_particles; ++i) dim *= local_dim;
  if (index >= static_cast<std::uint64_t>(dim)) throw ArgumentError("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), local_dim);
}

DensityMatrix::DensityMatrix(HermitianMatrix m, int local_dim)
    : m_(std::move(m)), d_(local_dim), n_(particle_count(m_.dim(), local_dim)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw ContractViolation("density matrix trace is " + std::to_string(tr));
  }
  const double min_eig = eigvals_lapack(m_.matrix())(0);
  if (min_eig < kEigenvalueFloor) {
    throw ContractViolation("density matrix has eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(HermitianMatrix::projector(psi.amplitudes()), psi.local_dim());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_particles, int local_dim) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n_particles; ++i) dim *= local_dim;
  return DensityMatrix(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)), local_dim);
}

DensityMatrix DensityMatrix::clipped(const Matrix& m, int local_dim) {
  EigenDecomposition e = eig_lapack(HermitianMatrix::symmetrized(m).matrix());
  e.values = e.values.cwiseMax(0.0);
  const double tr = e.values.sum();
  if (!(tr > 0.0)) throw ContractViolation("cannot clip a matrix with no positive spectrum");
  e.values /= tr;
  return DensityMatrix(HermitianMatrix::symmetrized(apply_spectral(e, [](double x) { return x; })),
                       local_dim);
}

Matrix partial_trace(const Matrix& rho, int n_particles, int local_dim, const std::vector<int>& keep) {
  if (keep.empty()) throw ArgumentError("partial trace needs a non-empty subset");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw ArgumentError("partial trace subset has repeated indices");
  }
  if (kept.front() < 0 || kept.back() >= n_particles) {
    throw ArgumentError("partial trace subset index out of range");
  }
  const Eigen::Index dim = rho.rows();
  std::vector<bool> is_kept(static_cast<std::size_t>(n_particles), false);
  for (int q : kept) is_kept[static_cast<std::size_t>(q)] = true;

  Eigen::Index kept_dim = 1;
  for (std::size_t i = 0; i < kept.size(); ++i) kept_dim *= local_dim;
  const Eigen::Index traced_dim = dim / kept_dim;

  // full index -> (kept index, traced index), particle 0 most significant.
  std::vector<Eigen::Index> full(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index rest = i;
    Eigen::Index a = 0;
    Eigen::Index t = 0;
    Eigen::Index a_scale = 1;
    Eigen::Index t_scale = 1;
    for (int q = n_particles - 1; q >= 0; --q) {
      const Eigen::Index digit = rest % local_dim;
      rest /= local_dim;
      if (is_kept[static_cast<std::size_t>(q)]) {
        a += digit * a_scale;
        a_scale *= local_dim;
      } else {
        t += digit * t_scale;
        t_scale *= local_dim;
      }
    }
    full[static_cast<std::size_t>(t * kept_dim + a)] = i;
  }

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index t = 0; t < traced_dim; ++t) {
    const Eigen::Index* block = &full[static_cast<std::size_t>(t * kept_dim)];
    for (Eigen::Index b = 0; b < kept_dim; ++b)
      for (Eigen::Index a = 0; a < kept_dim; ++a) out(a, b) += rho(block[a], block[b]);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Matrix reduced = partial_trace(rho.matrix(), rho.n_particles(), rho.local_dim(), keep);
  return DensityMatrix(HermitianMatrix::symmetrized(reduced), rho.local_dim());
}

double fidelity_pure(const Matrix& rho, const Vector& psi) {
  if (rho.rows() != psi.size()) throw DimensionError("fidelity: dimension mismatch");
  return psi.dot(rho * psi).real();
}

double fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
  return fidelity_pure(rho.matrix(), psi.amplitudes());
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw DimensionError("trace distance: dimension mismatch");
  const Matrix diff = rho - sigma;
  return 0.5 * eigvals_lapack((diff + diff.adjoint()) * 0.5).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(eigvals_lapack(rho.matrix()));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative entropy: dimension mismatch");
  const EigenDecomposition er = eig_lapack(rho.matrix());
  const EigenDecomposition es = eig_lapack(sigma.matrix());
  // tr[rho log sigma] = sum_j log(s_j) <s_j| rho |s_j>
  const Matrix rho_in_sigma = es.vectors.adjoint() * rho.matrix() * es.vectors;
  double cross = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const double weight = rho_in_sigma(j, j).real();
    if (es.values(j) <= 1e-14) {
      if (weight > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(es.values(j));
  }
  const double value = -entropy_of_spectrum(er.values) - cross;
  return std::max(value, 0.0);
}

PureState haar_random_pure(int n_particles, int local_dim, Rng& rng) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n_particles; ++i) dim *= local_dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v), local_dim);
}

PureState haar_random_pure(int n_particles, int local_dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_pure(n_particles, local_dim, rng);
}

DensityMatrix random_mixed_state(int n_particles, int local_dim, Rng& rng) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n_particles; ++i) dim *= local_dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianMatrix::symmetrized(rho), local_dim);
}

PureState ghz_state(int n_qubits, double alpha) {
  if (n_qubits < 1) throw ArgumentError("GHZ state needs at least one qubit");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector v = Vector::Zero(dim);
  v(0) = 1.0 / std::sqrt(2.0);
  v(dim - 1) = std::polar(1.0 / std::sqrt(2.0), alpha);
  return PureState::normalized(std::move(v));
}

}  // namespace kbody
