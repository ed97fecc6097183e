#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kbody/certification.hpp"
#include "kbody/graph_state.hpp"
#include "kbody/sdp.hpp"

namespace kbody {

/// A resolved state argument: "ring:N", "ghz:N", "eta4", "graph:<edge file>",
/// "file:<amplitudes.json>".
struct NamedState {
  std::string label;
  PureState state;
  std::optional<GraphState> graph;
};

/// Throws ArgumentError on malformed specs or unreadable files.
NamedState parse_state_spec(const std::string& spec);
/// Amplitude JSON: a list of reals or of [re, im] pairs, optionally wrapped
/// as {"amplitudes": [...]}. The vector is normalized.
PureState parse_amplitudes_json(const std::string& text);

/// "all", "nn" (adjacent pairs of an n-qubit chain) or "nnn" (also
/// next-to-adjacent pairs).
ConstraintScope scope_from_name(const std::string& name, int n_qubits);

/// Program JSON: {"target": spec string or amplitude list, "k", "delta",
/// "scope": name or list of Pauli strings, "objective": bool}. Missing
/// fields take MarginalProgram defaults; "target" is required.
MarginalProgram program_from_json(const std::string& text);
/// Inverse of program_from_json; the target is written as [re, im] pairs.
std::string program_to_json(const MarginalProgram& program, int indent = 2);

struct ExperimentConfig {
  std::string name = "fractions";
  int n = 5;
  int k = 2;
  std::vector<double> deltas{1e-3, 1e-5, 1e-7};
  int samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  ConstraintScope scope = ConstraintScope::all_up_to_weight();
  SolverOptions solver;
  bool timing = false;  // record wall time (makes output non-reproducible)
};

struct FractionRow {
  double delta = 0.0;
  int samples = 0;
  int detected = 0;
  int inconclusive = 0;
  double fraction = 0.0;
  double mean_iters = 0.0;  // over samples that needed a solve at this delta
  double seconds = 0.0;
};

struct FractionTable {
  ExperimentConfig config;
  std::vector<FractionRow> rows;  // ascending delta
  std::string to_csv() const;     // delta,samples,detected,fraction,mean_iters,seconds
  std::string to_json(int indent = 2) const;
};

/// Per-sample outcome at every delta; deltas are processed in ascending
/// order and decided outcomes propagate (a solution with lambda_min = l is a
/// solution for every delta <= l, infeasibility carries to larger delta).
struct SampleOutcome {
  std::vector<SdpStatus> status;  // aligned with the sorted deltas
  std::vector<int> iterations;    // 0 where the outcome was implied
};

SampleOutcome classify_sample(const PureState& psi, int k, const std::vector<double>& sorted_deltas,
                              const ConstraintScope& scope, const SolverOptions& solver);

using ProgressCallback = std::function<void(int done, int total)>;

/// Fraction of Haar-random pure states with a feasible program at each delta.
/// Sample i uses the seed derive_seed(config.seed, i). Throws ResourceError
/// before sampling if N exceeds the dense cap, ArgumentError on bad configs.
FractionTable run_fraction_experiment(const ExperimentConfig& config, const ProgressCallback& progress = {});

struct NnRestrictedReport {
  FractionTable nearest;       // weight-2 constraints on adjacent pairs only
  FractionTable next_nearest;  // adjacent and next-to-adjacent pairs
  CertificationResult eta_mixed;
  CertificationResult eta_ball;
  std::string to_json(int indent = 2) const;
};

/// Four-qubit chain study on one shared sample set.
NnRestrictedReport run_nn_restricted_experiment(int samples, std::uint64_t seed = 1, double delta = 1e-6,
                                                int threads = 1);

struct ConstantRow {
  std::string name;
  double value = 0.0;      // computed by the library
  double reference = 0.0;  // closed form
  std::string kind;        // closed_form, cross_check, numeric_oracle, sanity
  std::string derivation;
  bool consistent = false;
};

struct ConstantsReport {
  std::vector<ConstantRow> rows;
  Graph m6_graph;
  std::string to_json(int indent = 2) const;
  bool all_consistent() const;
};

ConstantsReport report_constants();

}  // namespace kbody
