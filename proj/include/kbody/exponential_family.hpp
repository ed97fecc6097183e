#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kbody/linalg.hpp"
#include "kbody/pauli.hpp"
#include "kbody/quantum_state.hpp"

namespace kbody {

/// H = sum_P c_P P over strings of weight <= k. The inverse temperature is
/// absorbed into the coefficients, so the thermal state is e^H / tr e^H.
class KLocalHamiltonian {
 public:
  KLocalHamiltonian(int n_qubits, int k);
  /// Throws ArgumentError if a term has weight > k.
  KLocalHamiltonian(int k, PauliExpansion terms);
  /// Coefficients aligned with `basis` (unsigned strings of weight <= k).
  static KLocalHamiltonian from_coefficients(int n_qubits, int k, const std::vector<PauliString>& basis,
                                             const std::vector<double>& theta);
  /// Independent N(0, scale^2) coefficients on every non-identity string of weight <= k.
  static KLocalHamiltonian random(int n_qubits, int k, double scale, Rng& rng);

  /// JSON text: [{"pauli": "XZI", "coeff": 0.5}, ...]. Locality is the
  /// largest term weight unless k is given.
  static KLocalHamiltonian from_json(const std::string& text, int k = -1);
  std::string to_json() const;

  int n_qubits() const noexcept { return terms_.n_qubits(); }
  int locality() const noexcept { return k_; }
  const PauliExpansion& terms() const noexcept { return terms_; }

  void add_term(const PauliString& p, double c);
  /// Drops the identity component; the thermal state is unchanged.
  KLocalHamiltonian traceless() const;
  HermitianMatrix to_dense() const;

 private:
  int k_;
  PauliExpansion terms_;
};

/// Non-identity unsigned strings of weight <= k (the coordinate basis).
std::vector<PauliString> coordinate_basis(int n_qubits, int k);

/// e^H / tr e^H with a spectral shift; dense cap kMaxDenseQubits.
DensityMatrix thermal_state(const KLocalHamiltonian& h);
DensityMatrix thermal_state(const HermitianMatrix& h);

/// theta: coefficients of H on the basis; eta_i = tr[rho A_i];
/// massieu = log tr e^H; potential = -S(rho). For thermal states
/// massieu + potential - theta . eta = 0.
struct ExponentialCoordinates {
  std::vector<PauliString> basis;
  std::vector<double> theta;
  std::vector<double> eta;
  double massieu = 0.0;
  double potential = 0.0;

  double legendre_residual() const;
};

ExponentialCoordinates exponential_coordinates(const KLocalHamiltonian& h);
/// log tr e^{sum theta_i A_i} and its gradient (tr[tau A_i]).
double massieu(int n_qubits, const std::vector<PauliString>& basis, const std::vector<double>& theta,
               std::vector<double>* gradient = nullptr);
/// eta_i = tr[rho A_i].
std::vector<double> moments(const Matrix& rho, const std::vector<PauliString>& basis);

struct InfoProjectionOptions {
  int max_iterations = 500;
  double tolerance = 1e-7;  // max |tr[tau A_i] - tr[rho A_i]|
};

struct InfoProjection {
  DensityMatrix state;
  KLocalHamiltonian hamiltonian;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximum-entropy state with the same weight-<=k coefficients as rho,
/// found by damped Newton on the convex dual log tr e^H - theta . eta.
/// Requires N <= 8.
InfoProjection info_projection(const DensityMatrix& rho, int k, const InfoProjectionOptions& options = {});

/// |S(rho||tau) - S(rho||rho_k) - S(rho_k||tau)| with rho_k the information projection.
double pythagorean_residual(const DensityMatrix& rho, int k, const DensityMatrix& tau);
double pythagorean_residual(const DensityMatrix& rho, const DensityMatrix& projection, const DensityMatrix& tau);

/// (D - 1) / D: overlap bound for states whose k-marginals are all maximally mixed.
double overlap_bound(double dim);

/// (p+ e^{eta+} + p- e^{eta-}) / (e^{eta+} + e^{eta-} + (D-2) e^{-(eta+ + eta-)/(D-2)}).
/// Throws ArgumentError unless p+- >= 0, p+ + p- <= 1 and p+ eta+ + p- eta- = 0.
double four_variable_objective(double p_plus, double p_minus, double eta_plus, double eta_minus, double dim);
/// Same with p+ + p- = 1 and p- = eta+ / (eta+ - eta-). At eta+ = eta- the
/// constraint forces both to zero and the value is 1/D.
double four_variable_reduced(double eta_plus, double eta_minus, double dim);

struct FourVariableMaximum {
  double value = 0.0;
  double eta_plus = 0.0;
  double eta_minus = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
};

/// Multistart Nelder-Mead over (log eta+, log |eta-|).
FourVariableMaximum maximize_four_variable(double dim, std::uint64_t seed = 1, int restarts = 64);

struct OverlapAscentOptions {
  int restarts = 20;
  int iterations = 1500;
  double learning_rate = 0.05;
  double init_scale = 0.5;
  std::uint64_t seed = 1;
};

struct OverlapAscentResult {
  double best_fidelity = 0.0;
  KLocalHamiltonian hamiltonian;
  std::vector<double> restart_values;
};

/// Adam ascent of <psi| e^H / tr e^H |psi> over k-local H (N <= 8). The
/// gradient uses the divided-difference formula for the derivative of e^H.
OverlapAscentResult overlap_ascent(const PureState& target, int k, const OverlapAscentOptions& options = {});
/// Ascent from a given starting Hamiltonian (its locality must be <= k).
OverlapAscentResult overlap_ascent_from(const PureState& target, int k, const KLocalHamiltonian& start,
                                        const OverlapAscentOptions& options);
/// Fidelity and its gradient on the basis.
double thermal_fidelity(const PureState& target, const std::vector<PauliString>& basis,
                        const std::vector<double>& theta, std::vector<double>* gradient = nullptr);

}  // namespace kbody
