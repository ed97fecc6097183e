#include "kbody/pauli.hpp"

#include <bit>
#include <cmath>

#include "kbody/errors.hpp"

namespace kbody {

namespace {

int popcount(std::uint64_t v) { return std::popcount(v); }

const Complex kIPowers[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};

// Value of the string's matrix element <j ^ x| P |j> including sign.
Complex element(const PauliString& p, std::uint64_t j) {
  const int power = (popcount(p.x_mask() & p.z_mask()) + (p.sign() < 0 ? 2 : 0) +
                     2 * (popcount(p.z_mask() & j) & 1)) &
                    3;
  return kIPowers[power];
}

void check_dense_size(int n) {
  if (n > kMaxDenseQubits) {
    throw ResourceError("dense representation requested for " + std::to_string(n) +
                        " qubits (cap " + std::to_string(kMaxDenseQubits) + ")");
  }
}

std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

}  // namespace

int Phase::sign() const {
  if (!is_real()) throw ContractViolation("phase " + to_string() + " is not real");
  return power == 0 ? +1 : -1;
}

Complex Phase::value() const { return kIPowers[power & 3]; }

std::string Phase::to_string() const {
  static const char* names[4] = {"+1", "+i", "-1", "-i"};
  return names[power & 3];
}

PauliString::PauliString(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxSymbolicQubits) {
    throw ArgumentError("Pauli string qubit count must lie in [1, 64]");
  }
}

PauliString PauliString::from_masks(int n_qubits, std::uint64_t x, std::uint64_t z, int sign) {
  PauliString p(n_qubits);
  if (((x | z) & ~low_mask(n_qubits)) != 0) throw ArgumentError("Pauli mask exceeds qubit count");
  if (sign != 1 && sign != -1) throw ArgumentError("Pauli sign must be +1 or -1");
  p.x_ = x;
  p.z_ = z;
  p.sign_ = sign;
  return p;
}

PauliString PauliString::parse(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  if (text.empty()) throw ArgumentError("empty Pauli string");
  if (text.size() > static_cast<std::size_t>(kMaxSymbolicQubits)) {
    throw ArgumentError("Pauli string longer than 64 qubits");
  }
  const int n = static_cast<int>(text.size());
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = qubit_bit(n, q);
    switch (text[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw ArgumentError("invalid Pauli letter '" + std::string(1, text[static_cast<std::size_t>(q)]) +
                            "'");
    }
  }
  return from_masks(n, x, z, sign);
}

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= n_qubits) throw ArgumentError("qubit index out of range");
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  s[static_cast<std::size_t>(qubit)] = letter;
  return parse(s);
}

char PauliString::letter(int qubit) const {
  if (qubit < 0 || qubit >= n_) throw ArgumentError("qubit index out of range");
  const std::uint64_t bit = qubit_bit(n_, qubit);
  const bool xb = (x_ & bit) != 0;
  const bool zb = (z_ & bit) != 0;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

int PauliString::weight() const noexcept { return popcount(x_ | z_); }

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (int q = 0; q < n_; ++q)
    if ((x_ | z_) & qubit_bit(n_, q)) out.push_back(q);
  return out;
}

bool PauliString::commutes_with(const PauliString& o) const {
  if (n_ != o.n_) throw DimensionError("Pauli strings act on different qubit counts");
  return ((popcount(x_ & o.z_) + popcount(z_ & o.x_)) & 1) == 0;
}

std::string PauliString::to_string() const {
  std::string s = sign_ < 0 ? "-" : "";
  for (int q = 0; q < n_; ++q) s.push_back(letter(q));
  return s;
}

Matrix PauliString::to_dense() const {
  check_dense_size(n_);
  const std::uint64_t dim = std::uint64_t{1} << n_;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t j = 0; j < dim; ++j) {
    m(static_cast<Eigen::Index>(j ^ x_), static_cast<Eigen::Index>(j)) = element(*this, j);
  }
  return m;
}

std::strong_ordering PauliString::operator<=>(const PauliString& o) const {
  if (auto c = n_ <=> o.n_; c != 0) return c;
  if (auto c = x_ <=> o.x_; c != 0) return c;
  if (auto c = z_ <=> o.z_; c != 0) return c;
  return sign_ <=> o.sign_;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimensionError("Pauli product of mismatched lengths");
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^x Z^z, plus the i^{|x&z|} factors
  // that make each unsigned string Hermitian.
  int power = popcount(a.x_mask() & a.z_mask()) + popcount(b.x_mask() & b.z_mask()) +
              2 * popcount(a.z_mask() & b.x_mask()) - popcount(x & z);
  if (a.sign() < 0) power += 2;
  if (b.sign() < 0) power += 2;
  return PauliProduct{PauliString::from_masks(a.n_qubits(), x, z, +1), Phase{((power % 4) + 4) % 4}};
}

PauliString multiply_signed(const PauliString& a, const PauliString& b) {
  const PauliProduct p = multiply(a, b);
  if (!p.phase.is_real()) {
    throw ContractViolation("product " + a.to_string() + " * " + b.to_string() +
                            " has imaginary phase " + p.phase.to_string());
  }
  return PauliString::from_masks(p.string.n_qubits(), p.string.x_mask(), p.string.z_mask(),
                                 p.phase.sign());
}

std::uint64_t count_strings_up_to_weight(int n_qubits, int k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, w)
  std::uint64_t pow3 = 1;
  for (int w = 0; w <= k && w <= n_qubits; ++w) {
    total += binom * pow3;
    binom = binom * static_cast<std::uint64_t>(n_qubits - w) / static_cast<std::uint64_t>(w + 1);
    pow3 *= 3;
  }
  return total;
}

std::vector<PauliString> strings_up_to_weight(int n_qubits, int k) {
  if (k < 0 || k > n_qubits) throw ArgumentError("weight bound must satisfy 0 <= k <= n");
  std::vector<PauliString> out;
  out.reserve(static_cast<std::size_t>(count_strings_up_to_weight(n_qubits, k)));
  out.push_back(PauliString(n_qubits));
  std::vector<int> support;
  // Supports of size w in lexicographic order, letters in XYZ order per site.
  for (int w = 1; w <= k; ++w) {
    support.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) support[static_cast<std::size_t>(i)] = i;
    while (true) {
      int letters_total = 1;
      for (int i = 0; i < w; ++i) letters_total *= 3;
      for (int code = 0; code < letters_total; ++code) {
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        int c = code;
        for (int i = w - 1; i >= 0; --i) {
          const int letter = c % 3;
          c /= 3;
          const std::uint64_t bit = qubit_bit(n_qubits, support[static_cast<std::size_t>(i)]);
          if (letter == 0 || letter == 1) x |= bit;
          if (letter == 1 || letter == 2) z |= bit;
        }
        out.push_back(PauliString::from_masks(n_qubits, x, z));
      }
      int i = w - 1;
      while (i >= 0 && support[static_cast<std::size_t>(i)] == n_qubits - w + i) --i;
      if (i < 0) break;
      ++support[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < w; ++j)
        support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double pauli_coefficient(const Matrix& a, const PauliString& p) {
  const std::uint64_t dim = static_cast<std::uint64_t>(a.rows());
  if (dim != (std::uint64_t{1} << p.n_qubits()) || a.cols() != a.rows()) {
    throw DimensionError("matrix dimension does not match Pauli string");
  }
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  Complex acc(0, 0);
  for (std::uint64_t j = 0; j < dim; ++j) {
    const Complex v = a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x));
    if (popcount(z & j) & 1)
      acc -= v;
    else
      acc += v;
  }
  int power = popcount(x & z) + (p.sign() < 0 ? 2 : 0);
  return (kIPowers[power & 3] * acc).real() / static_cast<double>(dim);
}

void add_pauli(Matrix& a, const PauliString& p, double c) {
  const std::uint64_t dim = static_cast<std::uint64_t>(a.rows());
  if (dim != (std::uint64_t{1} << p.n_qubits()) || a.cols() != a.rows()) {
    throw DimensionError("matrix dimension does not match Pauli string");
  }
  const std::uint64_t x = p.x_mask();
  for (std::uint64_t j = 0; j < dim; ++j) {
    a(static_cast<Eigen::Index>(j ^ x), static_cast<Eigen::Index>(j)) += c * element(p, j);
  }
}

Vector apply_pauli(const PauliString& p, const Vector& v) {
  const std::uint64_t dim = static_cast<std::uint64_t>(v.size());
  if (dim != (std::uint64_t{1} << p.n_qubits())) throw DimensionError("vector dimension mismatch");
  Vector out(v.size());
  for (std::uint64_t j = 0; j < dim; ++j) {
    out(static_cast<Eigen::Index>(j ^ p.x_mask())) = element(p, j) * v(static_cast<Eigen::Index>(j));
  }
  return out;
}

double pauli_expectation(const Vector& v, const PauliString& p) {
  return v.dot(apply_pauli(p, v)).real();
}

// ---------------------------------------------------------------------------

PauliExpansion::PauliExpansion(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxSymbolicQubits) throw ArgumentError("invalid qubit count");
}

PauliExpansion PauliExpansion::expand(const Matrix& m, double drop_tolerance) {
  if (m.rows() != m.cols() || m.rows() < 2) throw DimensionError("expand requires a square matrix");
  const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
  if (!std::has_single_bit(dim)) throw DimensionError("matrix dimension is not a power of two");
  const int n = std::countr_zero(dim);
  check_dense_size(n);
  const double defect = hermiticity_defect(m);
  if (defect > HermitianMatrix::kDefaultTolerance) {
    throw ContractViolation("expand: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }

  PauliExpansion out(n);
  std::vector<Complex> f(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      f[j] = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x));
    }
    // In-place Walsh-Hadamard: f[z] <- sum_j (-1)^{|z & j|} f[j].
    for (std::uint64_t h = 1; h < dim; h <<= 1) {
      for (std::uint64_t i = 0; i < dim; i += 2 * h) {
        for (std::uint64_t j = i; j < i + h; ++j) {
          const Complex u = f[j];
          const Complex v = f[j + h];
          f[j] = u + v;
          f[j + h] = u - v;
        }
      }
    }
    for (std::uint64_t z = 0; z < dim; ++z) {
      const double c = (kIPowers[popcount(x & z) & 3] * f[z]).real() / static_cast<double>(dim);
      if (std::abs(c) > drop_tolerance) out.terms_.emplace(PauliString::from_masks(n, x, z), c);
    }
  }
  return out;
}

double PauliExpansion::coefficient(const PauliString& p) const {
  auto it = terms_.find(p.unsigned_part());
  return it == terms_.end() ? 0.0 : it->second;
}

void PauliExpansion::add_term(const PauliString& p, double c) {
  if (p.n_qubits() != n_) throw DimensionError("term acts on a different qubit count");
  const double signed_c = p.sign() < 0 ? -c : c;
  auto [it, inserted] = terms_.emplace(p.unsigned_part(), signed_c);
  if (!inserted) {
    it->second += signed_c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

PauliExpansion PauliExpansion::project(int k) const {
  if (k < 0 || k > n_) throw ArgumentError("projection weight must satisfy 0 <= k <= n");
  PauliExpansion out(n_);
  for (const auto& [p, c] : terms_)
    if (p.weight() <= k) out.terms_.emplace_hint(out.terms_.end(), p, c);
  return out;
}

PauliExpansion PauliExpansion::restrict_to(const std::vector<PauliString>& strings) const {
  PauliExpansion out(n_);
  for (const auto& s : strings) {
    if (s.n_qubits() != n_) throw DimensionError("restriction string acts on a different qubit count");
    auto it = terms_.find(s.unsigned_part());
    if (it != terms_.end()) out.terms_.insert(*it);
  }
  return out;
}

int PauliExpansion::max_weight() const {
  int w = 0;
  for (const auto& [p, c] : terms_) w = std::max(w, p.weight());
  return w;
}

void PauliExpansion::check_compatible(const PauliExpansion& o) const {
  if (n_ != o.n_) throw DimensionError("expansions act on different qubit counts");
}

PauliExpansion PauliExpansion::operator+(const PauliExpansion& o) const {
  check_compatible(o);
  PauliExpansion out = *this;
  for (const auto& [p, c] : o.terms_) out.add_term(p, c);
  return out;
}

PauliExpansion PauliExpansion::operator-(const PauliExpansion& o) const { return *this + o * -1.0; }

PauliExpansion PauliExpansion::operator*(double s) const {
  PauliExpansion out(n_);
  if (s == 0.0) return out;
  for (const auto& [p, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), p, c * s);
  return out;
}

double PauliExpansion::max_abs_difference(const PauliExpansion& o) const {
  check_compatible(o);
  double d = 0.0;
  for (const auto& [p, c] : terms_) d = std::max(d, std::abs(c - o.coefficient(p)));
  for (const auto& [p, c] : o.terms_) d = std::max(d, std::abs(c - coefficient(p)));
  return d;
}

Matrix PauliExpansion::to_dense() const {
  check_dense_size(n_);
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [p, c] : terms_) add_pauli(m, p, c);
  return m;
}

}  // namespace kbody
