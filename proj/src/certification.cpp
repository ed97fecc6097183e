#include "kbody/certification.hpp"

#include <cmath>

#include <json.hpp>

#include "kbody/errors.hpp"
#include "kbody/exponential_family.hpp"

namespace kbody {

std::string to_string(CertificationMethod m) {
  return m == CertificationMethod::SdpBall ? "sdp_ball" : "rdm_maximally_mixed";
}

std::string to_string(CertificationStatus s) {
  switch (s) {
    case CertificationStatus::Certified:
      return "certified";
    case CertificationStatus::NotCertified:
      return "not_certified";
    case CertificationStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string CertificationResult::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["target"] = target;
  j["k"] = k;
  j["delta"] = delta;
  j["alpha"] = alpha;
  j["method"] = to_string(method);
  j["status"] = to_string(status);
  j["rel_entropy_lb_nats"] = rel_entropy_lb_nats;
  j["scope"] = scope;
  if (entropy_gap) j["entropy_gap"] = *entropy_gap;
  j["solver"] = {{"iterations", iterations},
                 {"residuals", {{"affine", affine_residual}, {"cone", cone_residual}}}};
  return j.dump(indent);
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_delta_range(double delta, double dim) {
  if (!(dim >= 2.0)) throw ArgumentError("dimension must be at least 2");
  if (!(delta >= 0.0) || delta > 1.0 / dim * (1.0 + 1e-12)) {
    throw ArgumentError("delta must lie in [0, 1/D]");
  }
}

}  // namespace

double fannes_C(double delta, double dim) {
  check_delta_range(delta, dim);
  return delta * std::log(dim - 1.0) - xlogx(delta) - xlogx(1.0 - delta);
}

double entropy_floor_gamma(double delta, double dim) {
  check_delta_range(delta, dim);
  const double rest = std::max(0.0, 1.0 - (dim - 1.0) * delta);
  return -xlogx(rest) - (dim - 1.0) * xlogx(delta);
}

double gap_F(double delta, double dim) { return entropy_floor_gamma(delta, dim) - 2.0 * fannes_C(delta, dim); }

double gap_G(double dim) { return gap_F(1.0 / dim, dim); }

double relative_entropy_lower_bound(double max_fidelity) {
  if (!(max_fidelity > 0.0) || max_fidelity > 1.0) throw ArgumentError("fidelity must lie in (0, 1]");
  return -std::log(max_fidelity);
}

double witness_value(double alpha, const PureState& psi, const Matrix& rho) {
  return alpha - fidelity_pure(rho, psi.amplitudes());
}

CertificationResult certify_ball(const PureState& psi, int k, double delta, const std::string& label,
                                 const ConstraintScope& scope, const SolverOptions& options) {
  const double dim = static_cast<double>(psi.dim());
  if (!(delta > 0.0)) throw ArgumentError("certify_ball needs delta > 0");
  if (delta * dim > 1.0 + 1e-12) throw ArgumentError("certify_ball needs delta * D <= 1");
  if (dim < 8.0) throw ArgumentError("certify_ball needs D >= 8");

  CertificationResult r;
  r.target = label;
  r.k = k;
  r.delta = delta;
  r.alpha = 1.0 - delta * delta;
  r.method = CertificationMethod::SdpBall;
  r.scope = scope.name();

  const SdpOutcome out = solve(MarginalProgram{psi, k, delta, scope, false}, options);
  r.iterations = out.iterations;
  r.affine_residual = out.affine_residual;
  r.cone_residual = out.cone_residual;
  switch (out.status) {
    case SdpStatus::Feasible: {
      const double gap = gap_F(std::min(delta, 1.0 / dim), dim);
      r.entropy_gap = gap;
      r.status = gap >= 0.0 ? CertificationStatus::Certified : CertificationStatus::Inconclusive;
      break;
    }
    case SdpStatus::InfeasibleNumerical:
      r.status = CertificationStatus::NotCertified;
      break;
    case SdpStatus::MaxIter:
      r.status = CertificationStatus::Inconclusive;
      break;
  }
  if (r.certified()) r.rel_entropy_lb_nats = relative_entropy_lower_bound(r.alpha);
  return r;
}

CertificationResult certify_maximally_mixed(const PureState& psi, int k, const std::string& label,
                                            const ConstraintScope& scope) {
  if (psi.local_dim() != 2) throw ArgumentError("certification supports qubits only");
  const int n = psi.n_particles();
  if (n > kMaxDenseQubits) throw ResourceError("dense marginal check is capped at 12 qubits");
  const double dim = static_cast<double>(psi.dim());
  CertificationResult r;
  r.target = label;
  r.k = k;
  r.delta = 1.0 / dim;
  r.alpha = overlap_bound(dim);
  r.method = CertificationMethod::RdmMaximallyMixed;
  r.scope = scope.name();
  bool mixed = true;
  for (const auto& p : scope.resolve(n, k)) {
    if (!p.is_identity() && std::abs(pauli_expectation(psi.amplitudes(), p)) > 1e-10) {
      mixed = false;
      break;
    }
  }
  r.status = mixed ? CertificationStatus::Certified : CertificationStatus::NotCertified;
  if (mixed) r.rel_entropy_lb_nats = relative_entropy_lower_bound(r.alpha);
  return r;
}

CertificationResult certify_maximally_mixed(const GraphState& g, int k, const std::string& label) {
  const double dim = std::ldexp(1.0, g.n_qubits());
  CertificationResult r;
  r.target = label;
  r.k = k;
  r.delta = 1.0 / dim;
  r.alpha = overlap_bound(dim);
  r.method = CertificationMethod::RdmMaximallyMixed;
  r.status = g.k_marginals_maximally_mixed(k) ? CertificationStatus::Certified : CertificationStatus::NotCertified;
  if (r.certified()) r.rel_entropy_lb_nats = relative_entropy_lower_bound(r.alpha);
  return r;
}

}  // namespace kbody
