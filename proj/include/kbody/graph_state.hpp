#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kbody/linalg.hpp"
#include "kbody/pauli.hpp"
#include "kbody/quantum_state.hpp"

namespace kbody {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph() = default;
  /// Throws ArgumentError on self-loops or out-of-range endpoints.
  /// Duplicate edges are merged.
  Graph(int n_vertices, const std::vector<Edge>& edges);

  /// Edge-list text: one "u v" pair (0-based) per line; blank lines and
  /// lines starting with '#' are ignored. An optional "vertices N" line fixes
  /// the vertex count, otherwise it is one more than the largest endpoint.
  static Graph parse_edge_list(std::istream& in);
  static Graph parse_edge_list(const std::string& text);
  std::string to_edge_list() const;

  int n_vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::uint64_t neighbor_mask(int v) const;  // bits in qubit_bit convention
  std::vector<int> neighbors(int v) const;
  int degree(int v) const;

  bool operator==(const Graph&) const = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;  // sorted, u < v
};

/// Largest N for which the stabilizer group is enumerated.
inline constexpr int kMaxEnumerationQubits = 25;

/// Graph state |G>: generators g_a = X_a prod_{b in N(a)} Z_b.
class GraphState {
 public:
  explicit GraphState(Graph graph);

  const Graph& graph() const noexcept { return graph_; }
  int n_qubits() const noexcept { return graph_.n_vertices(); }
  const std::vector<PauliString>& generators() const noexcept { return generators_; }

  /// Visits all 2^N stabilizer elements in Gray-code order, starting with the
  /// identity. The visitor receives the subset mask of generators and the
  /// signed element. Throws ResourceError above kMaxEnumerationQubits.
  void for_each_stabilizer(const std::function<void(std::uint64_t, const PauliString&)>& visit) const;
  /// All elements (N <= 20), sorted by PauliString order.
  std::vector<PauliString> stabilizer() const;

  /// Minimal weight of a non-identity stabilizer element (cached).
  int min_weight() const;

  /// True iff no non-identity stabilizer element is supported inside any of
  /// the given qubit sets, i.e. all those marginals are maximally mixed.
  bool marginals_maximally_mixed(const std::vector<std::vector<int>>& subsets) const;
  /// Same for every subset of size <= k (equivalent to min_weight() > k).
  bool k_marginals_maximally_mixed(int k) const { return min_weight() > k; }

  /// Symbolic R_k(|G><G|): 2^-N times the stabilizer elements of weight <= k.
  PauliExpansion projected_expansion(int k) const;

  /// Dense amplitude vector prod CZ |+>^N (N <= kMaxDenseQubits).
  PureState state_vector() const;
  /// 2^-N sum_s s (N <= kMaxDenseQubits).
  Matrix projector_from_stabilizer() const;

 private:
  Graph graph_;
  std::vector<PauliString> generators_;
  mutable std::optional<int> min_weight_;
};

/// Cycle graph C_N (N >= 3).
GraphState ring_cluster(int n);
/// Four-qubit linear cluster with qubits 2 and 3 exchanged; generators
/// XIZI, IXZZ, ZZXI, IZIX.
GraphState permuted_linear_cluster_eta();
/// rows x cols square lattice with periodic boundaries.
GraphState torus_cluster(int rows, int cols);
/// Open linear chain on n vertices.
GraphState linear_cluster(int n);
/// Star graph (GHZ class) on n vertices, centre 0.
GraphState star_graph(int n);

/// m(|G>) for the graph's state. Throws ResourceError above kMaxEnumerationQubits.
int min_stabilizer_weight(const Graph& g);

struct GraphSearchResult {
  Graph graph;
  int min_weight = 0;
  std::uint64_t graphs_examined = 0;
};

/// First graph on n vertices (edge subsets in increasing bit order, subsets
/// with a vertex of degree < target_m - 1 skipped) with m(|G>) >= target_m.
/// Returns nullopt when the class is exhausted. Requires n <= 8.
std::optional<GraphSearchResult> search_graph_min_weight(int n, int target_m);

}  // namespace kbody
