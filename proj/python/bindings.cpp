#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "kbody/certification.hpp"
#include "kbody/errors.hpp"
#include "kbody/experiments.hpp"
#include "kbody/exponential_family.hpp"
#include "kbody/graph_state.hpp"
#include "kbody/pauli.hpp"

namespace py = pybind11;
using namespace kbody;

namespace {

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) { return Graph(n, edges); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Certificates that pure states lie outside convex hulls of k-body thermal states";

  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  m.def("overlap_bound", &overlap_bound, py::arg("dim"));
  m.def("relative_entropy_lower_bound", &relative_entropy_lower_bound, py::arg("max_fidelity"));
  m.def("fannes_C", &fannes_C, py::arg("delta"), py::arg("dim"));
  m.def("entropy_floor_gamma", &entropy_floor_gamma, py::arg("delta"), py::arg("dim"));
  m.def("gap_F", &gap_F, py::arg("delta"), py::arg("dim"));
  m.def("gap_G", &gap_G, py::arg("dim"));

  m.def("pauli_coefficients", [](const Matrix& a, int k) {
    PauliExpansion e = PauliExpansion::expand(a);
    if (k >= 0) e = e.project(k);
    std::map<std::string, double> out;
    for (const auto& [p, c] : e.terms()) out[p.to_string()] = c;
    return out;
  }, py::arg("matrix"), py::arg("k") = -1, "Coefficients tr[A P]/D keyed by Pauli string, optionally up to weight k.");

  m.def("state_from_spec", [](const std::string& spec) { return parse_state_spec(spec).state.amplitudes(); },
        py::arg("spec"), "Amplitudes for ring:N, ghz:N, eta4, graph:FILE or file:FILE.");

  m.def("graph_state_vector", [](int n, const std::vector<std::pair<int, int>>& edges) {
    return GraphState(make_graph(n, edges)).state_vector().amplitudes();
  }, py::arg("n"), py::arg("edges"));
  m.def("min_stabilizer_weight", [](int n, const std::vector<std::pair<int, int>>& edges) {
    return min_stabilizer_weight(make_graph(n, edges));
  }, py::arg("n"), py::arg("edges"));
  m.def("graph_stabilizer", [](int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::string> out;
    for (const auto& s : GraphState(make_graph(n, edges)).stabilizer()) out.push_back(s.to_string());
    return out;
  }, py::arg("n"), py::arg("edges"));
  m.def("search_graph", [](int n, int target) -> py::object {
    const auto hit = search_graph_min_weight(n, target);
    if (!hit) return py::none();
    return py::cast(hit->graph.edges());
  }, py::arg("n"), py::arg("target_m"), "Edges of a graph on n vertices with minimal stabilizer weight target_m.");

  m.def("certify_ball_json", [](const Vector& amps, int k, double delta, const std::string& label,
                                const std::string& scope) {
    const PureState psi = PureState::normalized(amps);
    return certify_ball(psi, k, delta, label, scope_from_name(scope, psi.n_particles())).to_json();
  }, py::arg("amplitudes"), py::arg("k"), py::arg("delta"), py::arg("label") = "state", py::arg("scope") = "all",
     py::call_guard<py::gil_scoped_release>());
  m.def("certify_maximally_mixed_json", [](const Vector& amps, int k, const std::string& label,
                                           const std::string& scope) {
    const PureState psi = PureState::normalized(amps);
    return certify_maximally_mixed(psi, k, label, scope_from_name(scope, psi.n_particles())).to_json();
  }, py::arg("amplitudes"), py::arg("k"), py::arg("label") = "state", py::arg("scope") = "all");

  m.def("thermal_state", [](const std::vector<std::pair<std::string, double>>& terms, int n, int k) {
    KLocalHamiltonian h(n, k);
    for (const auto& [p, c] : terms) h.add_term(PauliString::parse(p), c);
    return thermal_state(h).matrix();
  }, py::arg("terms"), py::arg("n"), py::arg("k"), "e^H / tr e^H for H = sum c P with weight(P) <= k.");

  m.def("info_projection", [](const Matrix& rho, int k) {
    const InfoProjection p = info_projection(DensityMatrix(HermitianMatrix(rho)), k);
    return std::make_tuple(Matrix(p.state.matrix()), p.converged, p.iterations);
  }, py::arg("rho"), py::arg("k"), py::call_guard<py::gil_scoped_release>(),
     "Maximum-entropy state with the same weight-<=k coefficients; returns (state, converged, iterations).");

  m.def("overlap_ascent", [](const Vector& amps, int k, int restarts, int iterations, std::uint64_t seed) {
    OverlapAscentOptions o;
    o.restarts = restarts;
    o.iterations = iterations;
    o.seed = seed;
    return overlap_ascent(PureState::normalized(amps), k, o).best_fidelity;
  }, py::arg("amplitudes"), py::arg("k"), py::arg("restarts") = 20, py::arg("iterations") = 1500,
     py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("four_variable_objective", &four_variable_objective, py::arg("p_plus"), py::arg("p_minus"),
        py::arg("eta_plus"), py::arg("eta_minus"), py::arg("dim"));

  m.def("run_fractions_csv", [](int n, int k, const std::vector<double>& deltas, int samples, std::uint64_t seed,
                                int threads, const std::string& scope) {
    ExperimentConfig c;
    c.n = n;
    c.k = k;
    c.deltas = deltas;
    c.samples = samples;
    c.seed = seed;
    c.threads = threads;
    c.scope = scope_from_name(scope, n);
    return run_fraction_experiment(c).to_csv();
  }, py::arg("n"), py::arg("k"), py::arg("deltas"), py::arg("samples"), py::arg("seed") = 1, py::arg("threads") = 1,
     py::arg("scope") = "all", py::call_guard<py::gil_scoped_release>());

  m.def("solve_program_json", [](const std::string& program) { return solve(program_from_json(program)).to_json(); },
        py::arg("program"), py::call_guard<py::gil_scoped_release>(),
        "Solves a program given as JSON and returns the outcome summary as JSON.");

  m.def("constants_json", [] { return report_constants().to_json(); });
}
