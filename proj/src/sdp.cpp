#include "kbody/sdp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "kbody/errors.hpp"

namespace kbody {

ConstraintScope ConstraintScope::all_up_to_weight() { return ConstraintScope{}; }

ConstraintScope ConstraintScope::chain(int n_qubits, int max_distance) {
  if (max_distance < 1) throw ArgumentError("chain scope needs max_distance >= 1");
  std::vector<PauliString> strings = strings_up_to_weight(n_qubits, 1);
  for (int i = 0; i < n_qubits; ++i) {
    for (int j = i + 1; j < n_qubits && j - i <= max_distance; ++j) {
      for (char a : {'X', 'Y', 'Z'}) {
        for (char b : {'X', 'Y', 'Z'}) {
          std::string s(static_cast<std::size_t>(n_qubits), 'I');
          s[static_cast<std::size_t>(i)] = a;
          s[static_cast<std::size_t>(j)] = b;
          strings.push_back(PauliString::parse(s));
        }
      }
    }
  }
  return explicit_strings(std::move(strings), max_distance == 1 ? "nn" : max_distance == 2 ? "nnn" : "chain");
}

ConstraintScope ConstraintScope::explicit_strings(std::vector<PauliString> strings, std::string name) {
  ConstraintScope scope;
  scope.kind_ = Kind::Explicit;
  scope.name_ = std::move(name);
  scope.strings_ = std::move(strings);
  return scope;
}

std::vector<PauliString> ConstraintScope::resolve(int n_qubits, int k) const {
  if (kind_ == Kind::AllUpToWeight) return strings_up_to_weight(n_qubits, k);
  std::set<PauliString> unique;
  unique.insert(PauliString(n_qubits));
  for (const auto& s : strings_) {
    if (s.n_qubits() != n_qubits) throw DimensionError("scope string acts on a different qubit count");
    unique.insert(s.unsigned_part());
  }
  std::vector<PauliString> out(unique.begin(), unique.end());
  // identity first, then by weight, matching strings_up_to_weight
  std::stable_sort(out.begin(), out.end(),
                   [](const PauliString& a, const PauliString& b) { return a.weight() < b.weight(); });
  return out;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Feasible: return "feasible";
    case SdpStatus::InfeasibleNumerical: return "infeasible_certified_numerically";
    case SdpStatus::MaxIter: return "max_iter";
  }
  return "unknown";
}

std::string SdpOutcome::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["status"] = to_string(status);
  j["objective"] = objective;
  j["min_eigenvalue"] = min_eigenvalue;
  j["iterations"] = iterations;
  j["fixed_strings"] = fixed_strings;
  j["residuals"] = {{"affine", affine_residual}, {"cone", cone_residual}, {"gap", gap}};
  return j.dump(indent);
}

// ---------------------------------------------------------------------------

AffineConstraints::AffineConstraints(int n_qubits, std::vector<PauliString> strings,
                                     std::vector<double> targets)
    : n_(n_qubits), strings_(std::move(strings)), targets_(std::move(targets)) {
  if (strings_.size() != targets_.size()) throw DimensionError("one target per fixed string required");
  const bool has_identity = std::any_of(strings_.begin(), strings_.end(),
                                        [](const PauliString& p) { return p.is_identity(); });
  if (!has_identity) throw ContractViolation("constraint list must contain the identity string");
}

AffineConstraints AffineConstraints::from_program(const MarginalProgram& program) {
  const int n = program.target.n_particles();
  if (program.target.local_dim() != 2) throw ArgumentError("marginal programs are defined for qubits");
  if (program.k < 0 || program.k > n) throw ArgumentError("k must satisfy 0 <= k <= n");
  std::vector<PauliString> strings = program.scope.resolve(n, program.k);
  std::vector<double> targets;
  targets.reserve(strings.size());
  for (const auto& p : strings) targets.push_back(pauli_expectation(program.target.amplitudes(), p) /
                                                  static_cast<double>(program.target.dim()));
  return AffineConstraints(n, std::move(strings), std::move(targets));
}

void AffineConstraints::project_in_place(Matrix& x) const {
  for (std::size_t i = 0; i < strings_.size(); ++i) {
    const double c = pauli_coefficient(x, strings_[i]);
    add_pauli(x, strings_[i], targets_[i] - c);
  }
}

Matrix AffineConstraints::project(const Matrix& x) const {
  Matrix y = x;
  project_in_place(y);
  return y;
}

double AffineConstraints::max_residual(const Matrix& x) const {
  double r = 0.0;
  for (std::size_t i = 0; i < strings_.size(); ++i)
    r = std::max(r, std::abs(pauli_coefficient(x, strings_[i]) - targets_[i]));
  return r;
}

Matrix project_affine(const Matrix& x, const MarginalProgram& program) {
  return AffineConstraints::from_program(program).project(x);
}

Matrix project_cone_shifted(const Matrix& x, double delta) {
  const Eigen::Index dim = x.rows();
  Matrix shifted = x;
  shifted.diagonal().array() -= delta;
  const EigenDecomposition e = eig_lapack(shifted);
  Eigen::Index negatives = 0;
  while (negatives < dim && e.values(negatives) < 0.0) ++negatives;
  if (negatives == 0) return x;
  const Eigen::Index positives = dim - negatives;
  Matrix out;
  if (positives <= negatives) {
    Matrix vp = e.vectors.rightCols(positives);
    vp *= e.values.tail(positives).cwiseSqrt().cast<Complex>().asDiagonal();
    out = vp * vp.adjoint();
    out.diagonal().array() += delta;
  } else {
    Matrix vn = e.vectors.leftCols(negatives);
    vn *= (-e.values.head(negatives)).cwiseSqrt().cast<Complex>().asDiagonal();
    out = x + vn * vn.adjoint();
  }
  return (out + out.adjoint()) * 0.5;
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  Matrix rho;
  double min_eigenvalue;
};

Candidate make_candidate(const AffineConstraints& affine, const Matrix& cone_point) {
  Candidate c{affine.project(cone_point), 0.0};
  c.min_eigenvalue = eigvals_lapack(c.rho)(0);
  return c;
}

void fill_solution(SdpOutcome& out, const Candidate& c, const AffineConstraints& affine,
                   const MarginalProgram& program) {
  out.solution = c.rho;
  out.min_eigenvalue = c.min_eigenvalue;
  out.affine_residual = affine.max_residual(c.rho);
  out.cone_residual = std::max(0.0, program.delta - c.min_eigenvalue);
  out.objective = fidelity_pure(c.rho, program.target.amplitudes());
}

class StallDetector {
 public:
  StallDetector(const SolverOptions& o, double delta)
      : window_(o.stall_window),
        relative_(o.stall_relative_change),
        floor_(delta > 0 ? std::min(o.stall_floor, delta / 10.0) : o.stall_floor),
        history_(static_cast<std::size_t>(o.stall_window) + 1, 0.0) {}

  bool push(int iteration, double gap) {
    const std::size_t slot = static_cast<std::size_t>(iteration) % history_.size();
    const double old = history_[slot];
    history_[slot] = gap;
    if (iteration <= window_) return false;
    return gap > floor_ && std::abs(old - gap) <= relative_ * gap;
  }

 private:
  int window_;
  double relative_;
  double floor_;
  std::vector<double> history_;
};

SdpOutcome douglas_rachford(const MarginalProgram& program, const SolverOptions& options,
                            const AffineConstraints& affine, Matrix z) {
  SdpOutcome out;
  out.fixed_strings = static_cast<int>(affine.strings().size());
  const double delta = program.delta;
  const bool objective = program.objective_enabled;
  Matrix weighted_target;
  if (objective) weighted_target = options.objective_step * program.target.projector();

  StallDetector stall(options, delta);
  std::optional<Candidate> best;
  double best_objective = 0.0;
  Matrix a;
  Matrix c;
  for (int it = 1; it <= options.max_iterations; ++it) {
    a = z;
    if (objective) a -= weighted_target;
    affine.project_in_place(a);
    c = project_cone_shifted(2.0 * a - z, delta);
    const Matrix step = c - a;
    const double gap = step.norm();
    z += step;
    out.iterations = it;
    out.gap = gap;

    if (it % options.check_interval == 0 || it == 1) {
      Candidate cand = make_candidate(affine, c);
      if (!objective) {
        if (cand.min_eigenvalue >= delta - options.cone_tolerance) {
          out.status = SdpStatus::Feasible;
          fill_solution(out, cand, affine, program);
          return out;
        }
      } else if (cand.min_eigenvalue >= delta - options.objective_cone_tolerance) {
        const double value = fidelity_pure(cand.rho, program.target.amplitudes());
        if (!best || value < best_objective) {
          best_objective = value;
          best = std::move(cand);
        }
        if (gap <= options.objective_gap_tolerance) {
          out.status = SdpStatus::Feasible;
          fill_solution(out, *best, affine, program);
          return out;
        }
      }
    }
    if (!objective && stall.push(it, gap)) {
      out.status = SdpStatus::InfeasibleNumerical;
      out.affine_residual = affine.max_residual(c);
      out.cone_residual = std::max(0.0, delta - eigvals_lapack(a)(0));
      return out;
    }
  }
  out.status = SdpStatus::MaxIter;
  if (best) {
    fill_solution(out, *best, affine, program);
  } else {
    out.affine_residual = affine.max_residual(c);
    out.cone_residual = std::max(0.0, delta - eigvals_lapack(a)(0));
  }
  return out;
}

SdpOutcome dykstra(const MarginalProgram& program, const SolverOptions& options,
                   const AffineConstraints& affine, Matrix x) {
  if (program.objective_enabled) {
    throw ArgumentError("the Dykstra method solves feasibility only; use Douglas-Rachford for objectives");
  }
  SdpOutcome out;
  out.fixed_strings = static_cast<int>(affine.strings().size());
  const double delta = program.delta;
  const Eigen::Index dim = x.rows();
  Matrix p = Matrix::Zero(dim, dim);
  Matrix q = Matrix::Zero(dim, dim);
  StallDetector stall(options, delta);
  Matrix y;
  for (int it = 1; it <= options.max_iterations; ++it) {
    y = affine.project(x + p);
    p += x - y;
    Matrix next = project_cone_shifted(y + q, delta);
    q += y - next;
    const double gap = (next - y).norm();
    x = std::move(next);
    out.iterations = it;
    out.gap = gap;
    if (it % options.check_interval == 0 || it == 1) {
      Candidate cand = make_candidate(affine, x);
      if (cand.min_eigenvalue >= delta - options.cone_tolerance) {
        out.status = SdpStatus::Feasible;
        fill_solution(out, cand, affine, program);
        return out;
      }
    }
    if (stall.push(it, gap)) {
      out.status = SdpStatus::InfeasibleNumerical;
      out.affine_residual = affine.max_residual(x);
      out.cone_residual = std::max(0.0, delta - eigvals_lapack(y)(0));
      return out;
    }
  }
  out.status = SdpStatus::MaxIter;
  out.affine_residual = affine.max_residual(x);
  out.cone_residual = std::max(0.0, delta - eigvals_lapack(y)(0));
  return out;
}

}  // namespace

SdpOutcome solve(const MarginalProgram& program, const SolverOptions& options, const Matrix& start) {
  const int n = program.target.n_particles();
  if (n > kMaxDenseQubits) {
    throw ResourceError("marginal program on " + std::to_string(n) + " qubits exceeds the dense cap");
  }
  if (!(program.delta >= 0.0)) throw ContractViolation("delta must be non-negative");
  const AffineConstraints affine = AffineConstraints::from_program(program);
  const Eigen::Index dim = program.target.dim();
  if (start.rows() != dim || start.cols() != dim) throw DimensionError("start matrix has wrong dimension");

  if (program.delta * static_cast<double>(dim) > 1.0 + 1e-12) {
    // tr rho = 1 and rho >= delta 1 are incompatible.
    SdpOutcome out;
    out.status = SdpStatus::InfeasibleNumerical;
    out.fixed_strings = static_cast<int>(affine.strings().size());
    out.cone_residual = program.delta - 1.0 / static_cast<double>(dim);
    return out;
  }
  switch (options.method) {
    case SplittingMethod::DouglasRachford:
      return douglas_rachford(program, options, affine, start);
    case SplittingMethod::Dykstra:
      return dykstra(program, options, affine, start);
  }
  return douglas_rachford(program, options, affine, start);
}

SdpOutcome solve(const MarginalProgram& program, const SolverOptions& options) {
  const Eigen::Index dim = program.target.dim();
  const Matrix start = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return solve(program, options, start);
}

}  // namespace kbody
