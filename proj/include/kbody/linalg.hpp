#pragma once

#include <Eigen/Dense>
#include <complex>

namespace kbody {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian matrix. Construction rejects inputs whose anti-Hermitian
/// part exceeds the tolerance (max-norm) and stores the exactly Hermitian
/// average (A + A^dagger) / 2.
class HermitianMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m, double tolerance = kDefaultTolerance);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix diagonal(const RealVector& diag);
  static HermitianMatrix projector(const Vector& v);
  /// For matrices Hermitian by construction (spectral functions, sums of
  /// Pauli terms): symmetrizes without the tolerance check.
  static HermitianMatrix symmetrized(const Matrix& m);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  struct Trusted {};
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// max |A - A^dagger| over entries.
double hermiticity_defect(const Matrix& m);

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are orthonormal eigenvectors
};

enum class EigenBackend {
  Jacobi,  // cyclic Jacobi on the real symmetric embedding
  Lapack,  // LAPACK zheevd
};

struct JacobiOptions {
  double off_diagonal_threshold = 1e-12;  // relative to the Frobenius norm
  int max_sweeps = 100;
};

EigenDecomposition eig_hermitian(const HermitianMatrix& a,
                                 EigenBackend backend = EigenBackend::Lapack);

// Unchecked entry points for hot loops that already guarantee Hermiticity.
EigenDecomposition eig_lapack(const Matrix& a);
RealVector eigvals_lapack(const Matrix& a);
EigenDecomposition eig_jacobi(const Matrix& a, const JacobiOptions& options = {});

/// Real symmetric 2D x 2D embedding [[Re A, -Im A], [Im A, Re A]].
RealMatrix real_embedding(const Matrix& a);
/// Inverse of real_embedding for matrices with the embedding's block structure.
Matrix from_real_embedding(const RealMatrix& r);

/// Cyclic Jacobi for a real symmetric matrix; eigenvalues ascending.
struct RealEigenDecomposition {
  RealVector values;
  RealMatrix vectors;
  int sweeps = 0;
};
RealEigenDecomposition jacobi_symmetric(const RealMatrix& a, const JacobiOptions& options = {});

/// f(A) = V f(diag) V^dagger.
template <typename F>
Matrix apply_spectral(const EigenDecomposition& e, F&& f) {
  RealVector fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

HermitianMatrix exp_hermitian(const HermitianMatrix& a);

/// Matrix logarithm of a strictly positive definite matrix.
/// Throws DomainError if the smallest eigenvalue is <= 1e-14.
HermitianMatrix log_pd(const HermitianMatrix& a);

}  // namespace kbody
