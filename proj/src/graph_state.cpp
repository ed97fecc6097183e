#include "kbody/graph_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include "kbody/errors.hpp"

namespace kbody {

Graph::Graph(int n_vertices, const std::vector<Edge>& edges) : n_(n_vertices) {
  if (n_vertices < 1) throw ArgumentError("graph needs at least one vertex");
  if (n_vertices > kMaxSymbolicQubits) throw ResourceError("graph has more than 64 vertices");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    }
    if (u == v) throw ArgumentError("self-loop at vertex " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Graph Graph::parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int declared = -1;
  int largest = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "vertices") {
      if (!(fields >> declared) || declared < 1) {
        throw ArgumentError("line " + std::to_string(line_no) + ": bad vertex count");
      }
      continue;
    }
    std::istringstream row(line);
    int u = 0;
    int v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) {
      throw ArgumentError("line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    if (u < 0 || v < 0) throw ArgumentError("line " + std::to_string(line_no) + ": negative vertex");
    largest = std::max({largest, u, v});
    edges.emplace_back(u, v);
  }
  const int n = declared > 0 ? declared : largest + 1;
  if (n < 1) throw ArgumentError("edge list is empty");
  return Graph(n, edges);
}

Graph Graph::parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

std::string Graph::to_edge_list() const {
  std::ostringstream out;
  out << "vertices " << n_ << '\n';
  for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
  return out.str();
}

std::uint64_t Graph::neighbor_mask(int v) const {
  std::uint64_t mask = 0;
  for (auto [a, b] : edges_) {
    if (a == v) mask |= qubit_bit(n_, b);
    if (b == v) mask |= qubit_bit(n_, a);
  }
  return mask;
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (auto [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

GraphState::GraphState(Graph graph) : graph_(std::move(graph)) {
  const int n = graph_.n_vertices();
  generators_.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    generators_.push_back(PauliString::from_masks(n, qubit_bit(n, a), graph_.neighbor_mask(a)));
  }
}

namespace {

void require_enumerable(int n) {
  if (n > kMaxEnumerationQubits) {
    throw ResourceError("stabilizer enumeration is capped at " + std::to_string(kMaxEnumerationQubits) +
                        " qubits (got " + std::to_string(n) + ")");
  }
}

}  // namespace

void GraphState::for_each_stabilizer(
    const std::function<void(std::uint64_t, const PauliString&)>& visit) const {
  const int n = n_qubits();
  require_enumerable(n);
  PauliString current(n);
  std::uint64_t subset = 0;
  visit(subset, current);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < count; ++i) {
    // Gray code: step i flips generator ctz(i).
    const int j = std::countr_zero(i);
    subset ^= std::uint64_t{1} << j;
    current = multiply_signed(current, generators_[static_cast<std::size_t>(j)]);
    visit(subset, current);
  }
}

std::vector<PauliString> GraphState::stabilizer() const {
  if (n_qubits() > 20) throw ResourceError("explicit stabilizer lists are capped at 20 qubits");
  std::vector<PauliString> out;
  out.reserve(std::size_t{1} << n_qubits());
  for_each_stabilizer([&](std::uint64_t, const PauliString& s) { out.push_back(s); });
  std::sort(out.begin(), out.end());
  return out;
}

int GraphState::min_weight() const {
  if (min_weight_) return *min_weight_;
  const int n = n_qubits();
  require_enumerable(n);
  // Only the support matters, so track the masks without signs.
  std::vector<std::uint64_t> gx(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> gz(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    gx[static_cast<std::size_t>(a)] = generators_[static_cast<std::size_t>(a)].x_mask();
    gz[static_cast<std::size_t>(a)] = generators_[static_cast<std::size_t>(a)].z_mask();
  }
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int best = n;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto j = static_cast<std::size_t>(std::countr_zero(i));
    x ^= gx[j];
    z ^= gz[j];
    // Any element with a non-empty subset has x != 0, so weight >= 1.
    best = std::min(best, std::popcount(x | z));
    if (best == 1) break;
  }
  min_weight_ = best;
  return best;
}

bool GraphState::marginals_maximally_mixed(const std::vector<std::vector<int>>& subsets) const {
  const int n = n_qubits();
  std::vector<std::uint64_t> masks;
  for (const auto& s : subsets) {
    std::uint64_t m = 0;
    for (int q : s) {
      if (q < 0 || q >= n) throw ArgumentError("marginal subset index out of range");
      m |= qubit_bit(n, q);
    }
    masks.push_back(m);
  }
  bool mixed = true;
  for_each_stabilizer([&](std::uint64_t subset, const PauliString& s) {
    if (subset == 0 || !mixed) return;
    for (std::uint64_t m : masks) {
      if ((s.support_mask() & ~m) == 0) {
        mixed = false;
        return;
      }
    }
  });
  return mixed;
}

PauliExpansion GraphState::projected_expansion(int k) const {
  if (k < 0) throw ArgumentError("k must be non-negative");
  const int n = n_qubits();
  const double scale = std::ldexp(1.0, -n);
  PauliExpansion out(n);
  for_each_stabilizer([&](std::uint64_t, const PauliString& s) {
    if (s.weight() <= k) out.add_term(s, scale);
  });
  return out;
}

PureState GraphState::state_vector() const {
  const int n = n_qubits();
  if (n > kMaxDenseQubits) throw ResourceError("dense graph states are capped at 12 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double amp = std::ldexp(1.0, -n) * std::sqrt(static_cast<double>(dim));
  Vector v(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    int parity = 0;
    for (auto [u, w] : graph_.edges()) {
      if ((bits & qubit_bit(n, u)) && (bits & qubit_bit(n, w))) parity ^= 1;
    }
    v(b) = parity ? -amp : amp;
  }
  return PureState::normalized(std::move(v));
}

Matrix GraphState::projector_from_stabilizer() const {
  const int n = n_qubits();
  if (n > kMaxDenseQubits) throw ResourceError("dense graph states are capped at 12 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  const double scale = 1.0 / static_cast<double>(dim);
  for_each_stabilizer([&](std::uint64_t, const PauliString& s) { add_pauli(m, s, scale); });
  return m;
}

GraphState ring_cluster(int n) {
  if (n < 3) throw ArgumentError("ring cluster needs N >= 3");
  std::vector<Graph::Edge> edges;
  for (int a = 0; a < n; ++a) edges.emplace_back(a, (a + 1) % n);
  return GraphState(Graph(n, edges));
}

GraphState permuted_linear_cluster_eta() {
  // Path 0-2-1-3: the linear cluster with the middle two qubits swapped.
  return GraphState(Graph(4, {{0, 2}, {1, 2}, {1, 3}}));
}

GraphState torus_cluster(int rows, int cols) {
  if (rows < 3 || cols < 3) throw ArgumentError("torus cluster needs at least 3 x 3");
  std::vector<Graph::Edge> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      edges.emplace_back(id(r, c), id(r, (c + 1) % cols));
      edges.emplace_back(id(r, c), id((r + 1) % rows, c));
    }
  return GraphState(Graph(rows * cols, edges));
}

GraphState linear_cluster(int n) {
  if (n < 1) throw ArgumentError("linear cluster needs N >= 1");
  std::vector<Graph::Edge> edges;
  for (int a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
  return GraphState(Graph(n, edges));
}

GraphState star_graph(int n) {
  if (n < 2) throw ArgumentError("star graph needs N >= 2");
  std::vector<Graph::Edge> edges;
  for (int a = 1; a < n; ++a) edges.emplace_back(0, a);
  return GraphState(Graph(n, edges));
}

int min_stabilizer_weight(const Graph& g) { return GraphState(g).min_weight(); }

std::optional<GraphSearchResult> search_graph_min_weight(int n, int target_m) {
  if (n < 1 || n > 8) throw ArgumentError("graph search supports 1 <= N <= 8");
  std::vector<Graph::Edge> all;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
  const std::uint64_t count = std::uint64_t{1} << all.size();
  GraphSearchResult result;
  std::vector<int> degree(static_cast<std::size_t>(n));
  for (std::uint64_t subset = 0; subset < count; ++subset) {
    // Generator g_a has weight 1 + deg(a), so every degree must reach m - 1.
    std::fill(degree.begin(), degree.end(), 0);
    std::vector<Graph::Edge> edges;
    for (std::size_t e = 0; e < all.size(); ++e) {
      if ((subset >> e) & 1U) {
        edges.push_back(all[e]);
        ++degree[static_cast<std::size_t>(all[e].first)];
        ++degree[static_cast<std::size_t>(all[e].second)];
      }
    }
    if (*std::min_element(degree.begin(), degree.end()) < target_m - 1) continue;
    ++result.graphs_examined;
    Graph g(n, edges);
    const int m = min_stabilizer_weight(g);
    if (m >= target_m) {
      result.graph = std::move(g);
      result.min_weight = m;
      return result;
    }
  }
  return std::nullopt;
}

}  // namespace kbody
