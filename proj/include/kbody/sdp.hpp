#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbody/linalg.hpp"
#include "kbody/pauli.hpp"
#include "kbody/quantum_state.hpp"

namespace kbody {

/// Which Pauli coefficients of the target are held fixed.
class ConstraintScope {
 public:
  enum class Kind { AllUpToWeight, Explicit };

  /// Every string of weight <= k.
  static ConstraintScope all_up_to_weight();
  /// All weight <= 1 strings plus the weight-2 strings supported on qubit
  /// pairs (i, j) with |i - j| <= max_distance along an open chain.
  static ConstraintScope chain(int n_qubits, int max_distance);
  /// Explicit list; the identity string is added if missing.
  static ConstraintScope explicit_strings(std::vector<PauliString> strings, std::string name = "explicit");

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  /// Resolved, de-duplicated, sorted unsigned strings including the identity.
  std::vector<PauliString> resolve(int n_qubits, int k) const;

 private:
  Kind kind_ = Kind::AllUpToWeight;
  std::string name_ = "all";
  std::vector<PauliString> strings_;
};

struct MarginalProgram {
  PureState target;
  int k = 2;
  double delta = 0.0;
  ConstraintScope scope = ConstraintScope::all_up_to_weight();
  bool objective_enabled = false;
};

enum class SdpStatus { Feasible, InfeasibleNumerical, MaxIter };
std::string to_string(SdpStatus s);

enum class SplittingMethod { DouglasRachford, Dykstra };

struct SolverOptions {
  SplittingMethod method = SplittingMethod::DouglasRachford;
  int max_iterations = 50000;
  double affine_tolerance = 1e-9;
  double cone_tolerance = 1e-9;
  // Infeasibility: the inter-set gap has changed by less than
  // stall_relative_change (relative) over stall_window iterations while
  // staying above the floor. The floor is min(stall_floor, delta / 10).
  int stall_window = 2000;
  double stall_floor = 1e-7;
  double stall_relative_change = 1e-2;
  // A candidate (affine projection of the cone iterate) is tested every
  // check_interval iterations.
  int check_interval = 10;
  // Linear objective: weight of tr[rho |psi><psi|] in the splitting, and the
  // cone residual accepted for objective-mode solutions.
  double objective_step = 0.1;
  double objective_cone_tolerance = 1e-8;
  double objective_gap_tolerance = 1e-9;
};

struct SdpOutcome {
  SdpStatus status = SdpStatus::MaxIter;
  std::optional<Matrix> solution;
  double objective = 0.0;        // tr[rho |psi><psi|] of the solution (if any)
  double affine_residual = 0.0;  // max |c_P(rho) - target_P| over fixed strings
  double cone_residual = 0.0;    // max(0, delta - lambda_min(rho))
  double gap = 0.0;              // final inter-set gap (Frobenius)
  double min_eigenvalue = 0.0;   // lambda_min of the solution (if any)
  int iterations = 0;
  int fixed_strings = 0;

  /// {status, objective, min_eigenvalue, iterations, fixed_strings,
  ///  residuals: {affine, cone, gap}}; the solution matrix is omitted.
  std::string to_json(int indent = 2) const;
};

/// Closed-form projection onto the affine set: the fixed Pauli coefficients
/// are overwritten with their targets.
class AffineConstraints {
 public:
  AffineConstraints(int n_qubits, std::vector<PauliString> strings, std::vector<double> targets);
  static AffineConstraints from_program(const MarginalProgram& program);

  int n_qubits() const noexcept { return n_; }
  const std::vector<PauliString>& strings() const noexcept { return strings_; }
  const std::vector<double>& targets() const noexcept { return targets_; }

  void project_in_place(Matrix& x) const;
  Matrix project(const Matrix& x) const;
  double max_residual(const Matrix& x) const;

 private:
  int n_;
  std::vector<PauliString> strings_;
  std::vector<double> targets_;
};

/// Euclidean projection onto {X : R(X) fixed to the program's targets}.
Matrix project_affine(const Matrix& x, const MarginalProgram& program);
/// Euclidean projection onto {X : X >= delta * 1}.
Matrix project_cone_shifted(const Matrix& x, double delta);

/// Solves: find rho >= delta 1 with the fixed coefficients of |psi><psi|
/// (optionally minimizing <psi|rho|psi>). Throws ResourceError above
/// kMaxDenseQubits, ContractViolation for negative delta.
SdpOutcome solve(const MarginalProgram& program, const SolverOptions& options = {});
/// Same, starting the splitting from `start` instead of 1/D.
SdpOutcome solve(const MarginalProgram& program, const SolverOptions& options, const Matrix& start);

}  // namespace kbody
