#pragma once

#include <optional>
#include <string>

#include "kbody/graph_state.hpp"
#include "kbody/quantum_state.hpp"
#include "kbody/sdp.hpp"

namespace kbody {

enum class CertificationMethod { SdpBall, RdmMaximallyMixed };
enum class CertificationStatus { Certified, NotCertified, Inconclusive };

std::string to_string(CertificationMethod m);
std::string to_string(CertificationStatus s);

struct CertificationResult {
  std::string target;
  int k = 0;
  double delta = 0.0;
  double alpha = 1.0;  // witness W = alpha 1 - |psi><psi|
  CertificationMethod method = CertificationMethod::SdpBall;
  CertificationStatus status = CertificationStatus::Inconclusive;
  double rel_entropy_lb_nats = 0.0;
  std::string scope = "all";
  // Solver diagnostics (sdp_ball only).
  int iterations = 0;
  double affine_residual = 0.0;
  double cone_residual = 0.0;
  std::optional<double> entropy_gap;  // F(delta, D) checked before success

  bool certified() const { return status == CertificationStatus::Certified; }
  /// {target, k, delta, alpha, method, status, rel_entropy_lb_nats, scope,
  ///  solver: {iterations, residuals: {affine, cone}}}
  std::string to_json(int indent = 2) const;
};

/// Searches for rho >= delta 1 sharing the fixed coefficients of |psi><psi|.
/// Success means no state in the exponential family has fidelity above
/// 1 - delta^2 with psi. Requires delta > 0, delta D <= 1 and D >= 8.
/// A solver that runs out of iterations yields Inconclusive, never Certified.
CertificationResult certify_ball(const PureState& psi, int k, double delta, const std::string& label = "state",
                                 const ConstraintScope& scope = ConstraintScope::all_up_to_weight(),
                                 const SolverOptions& options = {});

/// Certified with alpha = (D-1)/D when every fixed coefficient except the
/// identity vanishes (all constrained marginals maximally mixed).
CertificationResult certify_maximally_mixed(const PureState& psi, int k, const std::string& label = "state",
                                            const ConstraintScope& scope = ConstraintScope::all_up_to_weight());
/// Symbolic variant for graph states (any N up to the enumeration cap).
CertificationResult certify_maximally_mixed(const GraphState& g, int k, const std::string& label = "graph");

/// alpha - <psi|rho|psi>; negative values witness rho outside the convex hull.
double witness_value(double alpha, const PureState& psi, const Matrix& rho);

/// Sharp continuity bound C_delta = -delta log(delta/(D-1)) - (1-delta) log(1-delta).
double fannes_C(double delta, double dim);
/// Entropy floor of states with all eigenvalues >= delta:
/// -[1-(D-1)delta] log[1-(D-1)delta] - (D-1) delta log delta.
double entropy_floor_gamma(double delta, double dim);
/// F(delta, D) = Gamma - 2 C_delta.
double gap_F(double delta, double dim);
/// G(D) = F(1/D, D).
double gap_G(double dim);

/// -ln(max_fidelity), requires 0 < max_fidelity <= 1.
double relative_entropy_lower_bound(double max_fidelity);

}  // namespace kbody
