#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kbody/certification.hpp"
#include "kbody/errors.hpp"
#include "kbody/experiments.hpp"
#include "kbody/graph_state.hpp"

namespace {

constexpr int kExitResource = 2;
constexpr int kExitInvalid = 3;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kbody::ArgumentError("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kbody::ArgumentError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect pure states that are far from thermal states of k-body Hamiltonians"};
  app.require_subcommand(1);

  std::string state_spec;
  int k = 2;
  double delta = 0.0;
  std::string method = "ball";
  std::string scope_name = "all";
  auto* certify = app.add_subcommand("certify", "Certify that a state lies outside the convex hull of Q_k");
  certify->add_option("--state", state_spec, "ring:N, ghz:N, eta4, graph:FILE or file:FILE")->required();
  certify->add_option("--k", k, "Interaction order")->required()->check(CLI::PositiveNumber);
  certify->add_option("--delta", delta, "Ball radius (sdp_ball method)");
  certify->add_option("--method", method, "ball or mixed")->check(CLI::IsMember({"ball", "mixed"}));
  certify->add_option("--scope", scope_name, "Fixed coefficients: all, nn or nnn")
      ->check(CLI::IsMember({"all", "nn", "nnn"}));

  int n = 5;
  std::string deltas_text = "1e-3,1e-5,1e-7";
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out_path = "-";
  int threads = 1;
  bool timing = false;
  auto* fractions = app.add_subcommand("fractions", "Fraction of random pure states detected at each delta");
  fractions->add_option("--n", n, "Number of qubits")->required();
  fractions->add_option("--k", k, "Interaction order")->required();
  fractions->add_option("--deltas", deltas_text, "Comma-separated radii");
  fractions->add_option("--samples", samples, "Number of Haar-random states");
  fractions->add_option("--seed", seed, "Master seed");
  fractions->add_option("--out", out_path, "CSV path, '-' for stdout");
  fractions->add_option("--threads", threads, "Worker threads");
  fractions->add_option("--scope", scope_name, "Fixed coefficients: all, nn or nnn")
      ->check(CLI::IsMember({"all", "nn", "nnn"}));
  fractions->add_flag("--timing", timing, "Record wall time (output is then not reproducible)");

  std::string edges_path;
  bool min_weight = false;
  int search_n = 0;
  int search_m = 0;
  auto* graph = app.add_subcommand("graph", "Inspect graph states");
  graph->add_option("--edges", edges_path, "Edge list file, one 'u v' pair per line (0-based)");
  graph->add_flag("--min-weight", min_weight, "Report the minimal stabilizer weight");
  graph->add_option("--search", search_n, "Search graphs on this many vertices");
  graph->add_option("--target-m", search_m, "Minimal weight wanted by --search");

  std::string program_path;
  auto* solve = app.add_subcommand("solve", "Solve one marginal program given as JSON");
  solve->add_option("--program", program_path, "Program JSON file, '-' for stdin")->required();

  auto* constants = app.add_subcommand("constants", "Report closed-form constants with cross-checks");

  int nn_samples = 500;
  double nn_delta = 1e-6;
  auto* nn = app.add_subcommand("nn-restricted", "Four-qubit chain study with restricted interactions");
  nn->add_option("--samples", nn_samples, "Number of Haar-random states");
  nn->add_option("--seed", seed, "Master seed");
  nn->add_option("--delta", nn_delta, "Ball radius");
  nn->add_option("--threads", threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (certify->parsed()) {
      const kbody::NamedState s = kbody::parse_state_spec(state_spec);
      const kbody::ConstraintScope scope = kbody::scope_from_name(scope_name, s.state.n_particles());
      kbody::CertificationResult r;
      if (method == "mixed") {
        r = kbody::certify_maximally_mixed(s.state, k, s.label, scope);
      } else {
        if (certify->count("--delta") == 0) throw kbody::ArgumentError("--delta is required for the ball method");
        r = kbody::certify_ball(s.state, k, delta, s.label, scope);
      }
      std::cout << r.to_json() << '\n';
    } else if (fractions->parsed()) {
      kbody::ExperimentConfig config;
      config.n = n;
      config.k = k;
      config.samples = samples;
      config.seed = seed;
      config.threads = threads;
      config.timing = timing;
      config.scope = kbody::scope_from_name(scope_name, n);
      config.deltas.clear();
      std::stringstream list(deltas_text);
      for (std::string item; std::getline(list, item, ',');) {
        try {
          std::size_t used = 0;
          config.deltas.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw kbody::ArgumentError("bad delta '" + item + "'");
        }
      }
      const kbody::FractionTable t = kbody::run_fraction_experiment(config);
      write_output(out_path, t.to_csv());
      if (out_path != "-") std::cerr << t.to_json() << '\n';
    } else if (graph->parsed()) {
      nlohmann::ordered_json j;
      if (search_n > 0) {
        const auto hit = kbody::search_graph_min_weight(search_n, search_m);
        j["search"] = {{"n", search_n}, {"target_m", search_m}, {"found", hit.has_value()}};
        if (hit) {
          j["search"]["edge_list"] = hit->graph.to_edge_list();
          j["search"]["min_weight"] = hit->min_weight;
        }
      }
      if (!edges_path.empty()) {
        const kbody::Graph g = kbody::Graph::parse_edge_list(read_text(edges_path));
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        for (auto [u, v] : g.edges()) edges.push_back({u, v});
        j["graph"] = {{"vertices", g.n_vertices()}, {"edges", edges}};
        if (min_weight) j["min_weight"] = kbody::min_stabilizer_weight(g);
      }
      if (j.empty()) throw kbody::ArgumentError("graph needs --edges or --search");
      std::cout << j.dump(2) << '\n';
    } else if (solve->parsed()) {
      std::string text;
      if (program_path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
      } else {
        text = read_text(program_path);
      }
      std::cout << kbody::solve(kbody::program_from_json(text)).to_json() << '\n';
    } else if (constants->parsed()) {
      std::cout << kbody::report_constants().to_json() << '\n';
    } else if (nn->parsed()) {
      std::cout << kbody::run_nn_restricted_experiment(nn_samples, seed, nn_delta, threads).to_json() << '\n';
    }
  } catch (const kbody::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
