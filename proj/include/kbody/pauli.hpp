#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kbody/linalg.hpp"

namespace kbody {

/// Dense conversions are capped at this many qubits (4^12 Pauli strings,
/// 4096 x 4096 matrices). Larger systems stay symbolic.
inline constexpr int kMaxDenseQubits = 12;
/// Bit-mask representation limit for symbolic Pauli strings.
inline constexpr int kMaxSymbolicQubits = 64;

/// Power of i, reduced mod 4.
struct Phase {
  int power = 0;

  static Phase from_sign(int sign) { return Phase{sign < 0 ? 2 : 0}; }
  Phase operator*(Phase o) const { return Phase{(power + o.power) & 3}; }
  bool operator==(const Phase&) const = default;
  bool is_real() const { return (power & 1) == 0; }
  int sign() const;  // +1 / -1, throws if the phase is imaginary
  Complex value() const;
  std::string to_string() const;  // "+1", "+i", "-1", "-i"
};

/// Signed tensor product of single-qubit Paulis.
///
/// Letters are stored as X/Z bit masks in the dense-matrix convention: the
/// letter at text position q (qubit q, leftmost first) occupies bit n-1-q, so
/// qubit 0 is the most significant tensor factor. The unsigned string is the
/// Hermitian operator i^{|x & z|} X^x Z^z; `sign` multiplies it by +1 or -1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits);
  static PauliString from_masks(int n_qubits, std::uint64_t x, std::uint64_t z, int sign = +1);
  /// Optional sign prefix ('+' or '-') followed by letters from {I,X,Y,Z}.
  static PauliString parse(std::string_view text);
  static PauliString single(int n_qubits, int qubit, char letter);

  int n_qubits() const noexcept { return n_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  int sign() const noexcept { return sign_; }
  std::uint64_t support_mask() const noexcept { return x_ | z_; }

  char letter(int qubit) const;
  int weight() const noexcept;
  bool is_identity() const noexcept { return (x_ | z_) == 0; }
  /// Qubit indices (0-based, text order) where the string acts non-trivially.
  std::vector<int> support() const;
  bool commutes_with(const PauliString& o) const;

  PauliString unsigned_part() const { return from_masks(n_, x_, z_, +1); }
  PauliString negated() const { return from_masks(n_, x_, z_, -sign_); }
  std::string to_string() const;

  /// Dense 2^n x 2^n matrix, including the sign.
  Matrix to_dense() const;

  bool operator==(const PauliString& o) const = default;
  /// Total order on (n, x, z, sign); used for deterministic containers.
  std::strong_ordering operator<=>(const PauliString& o) const;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int sign_ = +1;
};

/// Bit of the dense basis index that carries qubit `qubit`.
inline std::uint64_t qubit_bit(int n_qubits, int qubit) {
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

struct PauliProduct {
  PauliString string;  // unsigned (sign +1)
  Phase phase;         // a * b = phase * string
};

/// Matrix product a * b. Throws DimensionError on mismatched qubit counts.
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// Product that must stay within a group of real-phase elements (stabilizers).
/// Throws ContractViolation if the phase is imaginary.
PauliString multiply_signed(const PauliString& a, const PauliString& b);

/// Number of Pauli strings on n qubits with weight <= k (including identity).
std::uint64_t count_strings_up_to_weight(int n_qubits, int k);

/// All unsigned strings with weight <= k, in deterministic order (by weight,
/// then support, then letters). The identity comes first.
std::vector<PauliString> strings_up_to_weight(int n_qubits, int k);

// ---------------------------------------------------------------------------
// Dense helpers. Inputs are 2^n x 2^n matrices in the same qubit ordering.

/// tr[A P] / D for an unsigned Pauli string P (the expansion coefficient).
/// Returns the real part; A is assumed Hermitian.
double pauli_coefficient(const Matrix& a, const PauliString& p);
/// A += c * P (sign of P included).
void add_pauli(Matrix& a, const PauliString& p, double c);
/// y = P x.
Vector apply_pauli(const PauliString& p, const Vector& x);
/// <v| P |v> (real for Hermitian P).
double pauli_expectation(const Vector& v, const PauliString& p);

/// Real-coefficient expansion of a Hermitian operator over unsigned Pauli
/// strings, with c_P = tr[A P] / D.
class PauliExpansion {
 public:
  using TermMap = std::map<PauliString, double>;

  PauliExpansion() = default;
  explicit PauliExpansion(int n_qubits);

  /// Throws ContractViolation if the matrix is not Hermitian within 1e-10,
  /// DimensionError if it is not 2^n x 2^n, ResourceError above kMaxDenseQubits.
  /// Coefficients with |c| <= drop_tolerance are omitted.
  static PauliExpansion expand(const Matrix& m, double drop_tolerance = 1e-14);

  int n_qubits() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of the (unsigned) string; zero if absent.
  double coefficient(const PauliString& p) const;
  /// Adds c * P; a signed P contributes with its sign.
  void add_term(const PauliString& p, double c);

  /// R_k: keeps exactly the terms of weight <= k.
  PauliExpansion project(int k) const;
  /// Keeps only the listed strings (signs ignored).
  PauliExpansion restrict_to(const std::vector<PauliString>& strings) const;
  int max_weight() const;

  PauliExpansion operator+(const PauliExpansion& o) const;
  PauliExpansion operator-(const PauliExpansion& o) const;
  PauliExpansion operator*(double s) const;

  /// max |c_P - c'_P| over the union of supports.
  double max_abs_difference(const PauliExpansion& o) const;

  Matrix to_dense() const;

 private:
  void check_compatible(const PauliExpansion& o) const;

  int n_ = 0;
  TermMap terms_;
};

}  // namespace kbody
