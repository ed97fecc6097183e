#include <gtest/gtest.h>

#include <algorithm>

#include "kbody/errors.hpp"
#include "kbody/graph_state.hpp"
#include "kbody/quantum_state.hpp"

using namespace kbody;

namespace {

std::vector<std::string> stabilizer_strings(const GraphState& g) {
  std::vector<std::string> out;
  for (const auto& s : g.stabilizer()) out.push_back(s.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

// Brute-force minimum weight from the dense projector: the smallest weight
// of a non-identity string with nonzero expectation.
int dense_min_weight(const GraphState& g) {
  const PureState psi = g.state_vector();
  int best = g.n_qubits() + 1;
  for (const auto& p : strings_up_to_weight(g.n_qubits(), g.n_qubits())) {
    if (!p.is_identity() && std::abs(pauli_expectation(psi.amplitudes(), p)) > 0.5) best = std::min(best, p.weight());
  }
  return best;
}

}  // namespace

TEST(Graph, ValidatesEdges) {
  EXPECT_THROW(Graph(3, {{0, 0}}), ArgumentError);
  EXPECT_THROW(Graph(3, {{0, 3}}), ArgumentError);
  const Graph g(3, {{1, 0}, {0, 1}, {2, 1}});
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.neighbors(1), (std::vector<int>{0, 2}));
}

TEST(Graph, EdgeListRoundTrip) {
  const Graph g = Graph::parse_edge_list("# ring\n0 1\n1 2\n\n2 3\n3 0\n");
  EXPECT_EQ(g.n_vertices(), 4);
  EXPECT_EQ(Graph::parse_edge_list(g.to_edge_list()), g);
  EXPECT_EQ(Graph::parse_edge_list("vertices 6\n0 1\n").n_vertices(), 6);
  EXPECT_THROW(Graph::parse_edge_list("0 1 2\n"), ArgumentError);
  EXPECT_THROW(Graph::parse_edge_list("0 x\n"), ArgumentError);
  EXPECT_THROW(Graph::parse_edge_list("1 1\n"), ArgumentError);
  EXPECT_THROW(Graph::parse_edge_list(""), ArgumentError);
}

TEST(EtaState, StabilizerMatchesKnownList) {
  const std::vector<std::string> expected{"IIII", "IXZZ", "IYZY", "IZIX", "XIZI", "XXIZ", "XYIY", "XZZX",
                                          "YIYX", "YXXY", "-YYXZ", "YZYI", "ZIXX", "-ZXYY", "ZYYZ", "ZZXI"};
  std::vector<std::string> sorted = expected;
  std::sort(sorted.begin(), sorted.end());
  const GraphState eta = permuted_linear_cluster_eta();
  EXPECT_EQ(stabilizer_strings(eta), sorted);
  std::vector<std::string> gens;
  for (const auto& g : eta.generators()) gens.push_back(g.to_string());
  EXPECT_EQ(gens, (std::vector<std::string>{"XIZI", "IXZZ", "ZZXI", "IZIX"}));
}

TEST(EtaState, NearestNeighbourMarginalsMixed) {
  const GraphState eta = permuted_linear_cluster_eta();
  EXPECT_TRUE(eta.marginals_maximally_mixed({{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_FALSE(eta.marginals_maximally_mixed({{0, 2}}));
  // Dense cross-check of the {1,3} marginal.
  const DensityMatrix r = partial_trace(DensityMatrix::from_pure(eta.state_vector()), {0, 2});
  EXPECT_GT((r.matrix() - Matrix::Identity(4, 4) / 4.0).norm(), 0.1);
}

TEST(GraphState, GeneratorsStabilizeDenseState) {
  for (const GraphState& g : {ring_cluster(5), permuted_linear_cluster_eta(), torus_cluster(3, 3), star_graph(4)}) {
    const Vector psi = g.state_vector().amplitudes();
    for (const auto& gen : g.generators()) EXPECT_LT((apply_pauli(gen, psi) - psi).norm(), 1e-12);
    const Matrix proj = g.projector_from_stabilizer();
    EXPECT_LT((proj - psi * psi.adjoint()).norm(), 1e-12);
    EXPECT_LT((proj * proj - proj).norm(), 1e-12);
  }
}

TEST(GraphState, StabilizerGroupClosedWithRealPhases) {
  const GraphState g = ring_cluster(4);
  const auto elems = g.stabilizer();
  ASSERT_EQ(elems.size(), 16u);
  for (const auto& a : elems)
    for (const auto& b : elems) {
      const PauliString c = multiply_signed(a, b);
      EXPECT_TRUE(std::binary_search(elems.begin(), elems.end(), c));
    }
}

TEST(MinWeight, KnownValues) {
  EXPECT_EQ(ring_cluster(5).min_weight(), 3);
  EXPECT_EQ(ring_cluster(6).min_weight(), 3);
  EXPECT_EQ(min_stabilizer_weight(Graph(2, {{0, 1}})), 2);
  EXPECT_EQ(linear_cluster(4).min_weight(), 2);
  EXPECT_EQ(star_graph(5).min_weight(), 2);
  EXPECT_EQ(torus_cluster(5, 5).min_weight(), 5);
}

TEST(MinWeight, AgreesWithDenseBruteForce) {
  for (const GraphState& g : {ring_cluster(5), ring_cluster(6), permuted_linear_cluster_eta(), linear_cluster(5),
                              torus_cluster(3, 3)}) {
    EXPECT_EQ(g.min_weight(), dense_min_weight(g)) << g.graph().to_edge_list();
  }
}

TEST(MinWeight, OnlyIdentityBelowM) {
  const GraphState g = ring_cluster(7);
  int below = 0;
  g.for_each_stabilizer([&](std::uint64_t, const PauliString& s) {
    if (s.weight() < g.min_weight()) ++below;
  });
  EXPECT_EQ(below, 1);
}

TEST(MinWeight, EnumerationCap) {
  EXPECT_THROW(ring_cluster(26).min_weight(), ResourceError);
  EXPECT_THROW(ring_cluster(13).state_vector(), ResourceError);
}

TEST(ProjectedExpansion, SymbolicMatchesDense) {
  const GraphState c5 = ring_cluster(5);
  const PauliExpansion r2 = c5.projected_expansion(2);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_NEAR(r2.coefficient(PauliString(5)), 1.0 / 32.0, 1e-15);
  const PauliExpansion dense = PauliExpansion::expand(c5.projector_from_stabilizer()).project(2);
  EXPECT_LT(dense.max_abs_difference(r2), 1e-12);
  const PauliExpansion r3 = c5.projected_expansion(3);
  EXPECT_LT(PauliExpansion::expand(c5.projector_from_stabilizer()).project(3).max_abs_difference(r3), 1e-12);
  EXPECT_GT(r3.size(), 1u);
}

TEST(GraphSearch, FindsAndExhausts) {
  EXPECT_FALSE(search_graph_min_weight(4, 3).has_value());
  const auto c5 = search_graph_min_weight(5, 3);
  ASSERT_TRUE(c5.has_value());
  EXPECT_EQ(c5->graph.edges().size(), 5u);  // a five-cycle
  for (int v = 0; v < 5; ++v) EXPECT_EQ(c5->graph.degree(v), 2);
  const auto m6 = search_graph_min_weight(6, 4);
  ASSERT_TRUE(m6.has_value());
  EXPECT_GE(m6->min_weight, 4);
  const GraphState g(m6->graph);
  const PauliExpansion r3 = PauliExpansion::expand(g.projector_from_stabilizer()).project(3);
  ASSERT_EQ(r3.size(), 1u);
  EXPECT_NEAR(r3.coefficient(PauliString(6)), 1.0 / 64.0, 1e-14);
}
