#include "kbody/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "kbody/errors.hpp"

namespace kbody {

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) throw DimensionError("Hermitian matrix must be square");
  if (m.size() > 0) {
    const double defect = hermiticity_defect(m);
    if (!(defect <= tolerance)) {
      throw ContractViolation("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  return HermitianMatrix(diag.cast<Complex>().asDiagonal().toDenseMatrix(), Trusted{});
}

HermitianMatrix HermitianMatrix::projector(const Vector& v) {
  Matrix p = v * v.adjoint();
  p = (p + p.adjoint()) * 0.5;
  return HermitianMatrix(std::move(p), Trusted{});
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("Hermitian matrix must be square");
  return HermitianMatrix((m + m.adjoint()) * 0.5, Trusted{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in sum");
  return HermitianMatrix(m_ + o.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in difference");
  return HermitianMatrix(m_ - o.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s, Trusted{});
}

// ---------------------------------------------------------------------------
// LAPACK

EigenDecomposition eig_lapack(const Matrix& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenDecomposition out;
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n,
                                         out.values.data());
  if (info != 0) throw NumericError("zheevd failed with info " + std::to_string(info), info);
  return out;
}

RealVector eigvals_lapack(const Matrix& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Matrix work = a;
  RealVector w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, w.data());
  if (info != 0) throw NumericError("zheevd failed with info " + std::to_string(info), info);
  return w;
}

// ---------------------------------------------------------------------------
// Jacobi

RealMatrix real_embedding(const Matrix& a) {
  const Eigen::Index n = a.rows();
  RealMatrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = a.real();
  r.topRightCorner(n, n) = -a.imag();
  r.bottomLeftCorner(n, n) = a.imag();
  r.bottomRightCorner(n, n) = a.real();
  return r;
}

Matrix from_real_embedding(const RealMatrix& r) {
  if (r.rows() != r.cols() || r.rows() % 2 != 0) {
    throw DimensionError("real embedding must be square with even dimension");
  }
  const Eigen::Index n = r.rows() / 2;
  Matrix a(n, n);
  a.real() = 0.5 * (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n));
  a.imag() = 0.5 * (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n));
  return a;
}

RealEigenDecomposition jacobi_symmetric(const RealMatrix& input, const JacobiOptions& options) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw DimensionError("Jacobi requires a square matrix");
  RealMatrix a = 0.5 * (input + input.transpose());
  RealMatrix v = RealMatrix::Identity(n, n);
  const double scale = a.norm();

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
  };

  RealEigenDecomposition out;
  double off = off_norm();
  int sweep = 0;
  while (off > options.off_diagonal_threshold * scale) {
    if (sweep == options.max_sweeps) {
      throw NumericError("Jacobi did not converge within " + std::to_string(options.max_sweeps) +
                             " sweeps",
                         off / (scale > 0 ? scale : 1.0));
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
    off = off_norm();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  out.sweeps = sweep;
  return out;
}

EigenDecomposition eig_jacobi(const Matrix& a, const JacobiOptions& options) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionError("eig_jacobi requires a square matrix");
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  // Each eigenvalue of A appears twice in the embedding. A real eigenvector
  // (u; v) maps to the complex eigenvector u + i v; within a cluster of 2m
  // equal real eigenvalues the images span the m-dimensional complex
  // eigenspace, from which a pivoted QR extracts an orthonormal basis.
  const RealEigenDecomposition re = jacobi_symmetric(real_embedding(a), options);
  const double tol = 1e-9 * std::max(1.0, re.values.cwiseAbs().maxCoeff());

  Eigen::Index filled = 0;
  Eigen::Index start = 0;
  const Eigen::Index total = 2 * n;
  while (start < total) {
    Eigen::Index end = start + 1;
    while (end < total && re.values(end) - re.values(end - 1) <= tol) ++end;
    const Eigen::Index cluster = end - start;
    const Eigen::Index m = cluster / 2;
    if (cluster % 2 != 0 || filled + m > n) {
      throw NumericError("embedding spectrum is not paired", static_cast<double>(cluster));
    }
    Matrix candidates(n, cluster);
    for (Eigen::Index j = 0; j < cluster; ++j) {
      const auto col = re.vectors.col(start + j);
      candidates.col(j).real() = col.head(n);
      candidates.col(j).imag() = col.tail(n);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(candidates);
    Matrix q = qr.householderQ() * Matrix::Identity(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      out.vectors.col(filled + j) = q.col(j);
      out.values(filled + j) = (q.col(j).adjoint() * a * q.col(j))(0, 0).real();
    }
    filled += m;
    start = end;
  }
  if (filled != n) throw NumericError("embedding produced too few eigenvectors", static_cast<double>(filled));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return out.values(i) < out.values(j); });
  EigenDecomposition sorted;
  sorted.values.resize(n);
  sorted.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted.values(i) = out.values(order[i]);
    sorted.vectors.col(i) = out.vectors.col(order[i]);
  }
  return sorted;
}

EigenDecomposition eig_hermitian(const HermitianMatrix& a, EigenBackend backend) {
  switch (backend) {
    case EigenBackend::Jacobi:
      return eig_jacobi(a.matrix());
    case EigenBackend::Lapack:
      return eig_lapack(a.matrix());
  }
  return eig_lapack(a.matrix());
}

HermitianMatrix exp_hermitian(const HermitianMatrix& a) {
  const EigenDecomposition e = eig_lapack(a.matrix());
  return HermitianMatrix::symmetrized(apply_spectral(e, [](double x) { return std::exp(x); }));
}

HermitianMatrix log_pd(const HermitianMatrix& a) {
  const EigenDecomposition e = eig_lapack(a.matrix());
  if (e.values.size() > 0 && !(e.values(0) > 1e-14)) {
    throw DomainError("log_pd: matrix is not strictly positive definite (min eigenvalue " +
                      std::to_string(e.values(0)) + ")");
  }
  return HermitianMatrix::symmetrized(apply_spectral(e, [](double x) { return std::log(x); }));
}

}  // namespace kbody
