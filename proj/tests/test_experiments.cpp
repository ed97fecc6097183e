#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "kbody/errors.hpp"
#include "kbody/experiments.hpp"

#include <json.hpp>

using namespace kbody;

TEST(StateSpec, Parses) {
  EXPECT_EQ(parse_state_spec("ring:5").state.n_particles(), 5);
  EXPECT_TRUE(parse_state_spec("ring:5").graph.has_value());
  EXPECT_EQ(parse_state_spec("ghz:3").state.dim(), 8);
  EXPECT_EQ(parse_state_spec("eta4").graph->min_weight(), 2);
  EXPECT_THROW(parse_state_spec("ring:x"), ArgumentError);
  EXPECT_THROW(parse_state_spec("ring:2"), ArgumentError);
  EXPECT_THROW(parse_state_spec("torus:5"), ArgumentError);
  EXPECT_THROW(parse_state_spec("file:/nonexistent.json"), ArgumentError);
}

TEST(StateSpec, FilesRoundTrip) {
  const std::string graph_path = ::testing::TempDir() + "ring.edges";
  std::ofstream(graph_path) << "0 1\n1 2\n2 3\n3 4\n4 0\n";
  EXPECT_EQ(parse_state_spec("graph:" + graph_path).graph->min_weight(), 3);
  const std::string amp_path = ::testing::TempDir() + "amps.json";
  std::ofstream(amp_path) << "[[1, 0], [0, 0], [0, 0], [0, 1]]";
  const PureState s = parse_state_spec("file:" + amp_path).state;
  EXPECT_NEAR(std::abs(s.amplitudes()(3)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(parse_amplitudes_json(R"({"amplitudes": [0.6, 0.8]})").amplitudes()(1), Complex(0.8, 0.0));
  EXPECT_THROW(parse_amplitudes_json("[1, 2, 3]"), DimensionError);
  EXPECT_THROW(parse_amplitudes_json("[\"a\", 1]"), ArgumentError);
}

TEST(ClassifySample, PropagatesDecisions) {
  const PureState c5 = ring_cluster(5).state_vector();
  const SampleOutcome f =
      classify_sample(c5, 2, {1e-4, 1e-3, 1.0 / 32.0}, ConstraintScope::all_up_to_weight(), SolverOptions{});
  for (auto s : f.status) EXPECT_EQ(s, SdpStatus::Feasible);
  // A product state is infeasible at the first radius, which settles the rest.
  const SampleOutcome p = classify_sample(PureState::basis(3, 0), 2, {1e-4, 1e-3, 1e-2},
                                          ConstraintScope::all_up_to_weight(), SolverOptions{});
  for (auto s : p.status) EXPECT_EQ(s, SdpStatus::InfeasibleNumerical);
  EXPECT_GT(p.iterations[0], 0);
  EXPECT_EQ(p.iterations[1], 0);
  EXPECT_EQ(p.iterations[2], 0);
}

TEST(Fractions, ThreeQubitStatesAreNeverDetected) {
  ExperimentConfig c;
  c.n = 3;
  c.k = 2;
  c.deltas = {1e-5};
  c.samples = 25;
  c.seed = 4;
  const FractionTable t = run_fraction_experiment(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].detected, 0);
  EXPECT_EQ(t.rows[0].inconclusive, 0);
}

TEST(Fractions, CsvIsReproducibleAndMonotone) {
  ExperimentConfig c;
  c.n = 4;
  c.k = 1;
  c.deltas = {1e-2, 1e-4, 1e-3};
  c.samples = 12;
  c.seed = 5;
  const FractionTable a = run_fraction_experiment(c);
  c.threads = 2;
  const FractionTable b = run_fraction_experiment(c);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  const std::string csv = a.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta,samples,detected,fraction,mean_iters,seconds");
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_LT(a.rows[0].delta, a.rows[2].delta);
  EXPECT_GE(a.rows[0].detected, a.rows[1].detected);
  EXPECT_GE(a.rows[1].detected, a.rows[2].detected);
  for (const auto& r : a.rows) EXPECT_EQ(r.seconds, 0.0);
}

TEST(Fractions, ConfigErrors) {
  ExperimentConfig c;
  c.n = 13;
  EXPECT_THROW(run_fraction_experiment(c), ResourceError);
  c.n = 3;
  c.samples = 0;
  EXPECT_THROW(run_fraction_experiment(c), ArgumentError);
  c.samples = 1;
  c.deltas = {};
  EXPECT_THROW(run_fraction_experiment(c), ArgumentError);
}

TEST(Constants, AllConsistent) {
  const ConstantsReport r = report_constants();
  EXPECT_TRUE(r.all_consistent()) << r.to_json();
  EXPECT_EQ(r.m6_graph.n_vertices(), 6);
  EXPECT_NE(r.to_json().find("overlap_bound_m6_k3"), std::string::npos);
}

TEST(ProgramJson, RoundTripAndSolve) {
  const MarginalProgram p = program_from_json(R"({"target": "ring:5", "k": 2, "delta": 0.03125})");
  EXPECT_EQ(p.target.n_particles(), 5);
  EXPECT_EQ(p.scope.kind(), ConstraintScope::Kind::AllUpToWeight);
  const MarginalProgram q = program_from_json(program_to_json(p));
  EXPECT_EQ(q.k, 2);
  EXPECT_EQ(q.delta, 0.03125);
  EXPECT_LT((q.target.amplitudes() - p.target.amplitudes()).norm(), 1e-15);
  const auto outcome = nlohmann::json::parse(solve(q).to_json());
  EXPECT_EQ(outcome["status"], "feasible");
  EXPECT_LE(outcome["residuals"]["affine"].get<double>(), 1e-9);

  const MarginalProgram nn = program_from_json(R"({"target": "eta4", "k": 2, "scope": "nn", "delta": 0.0625})");
  const MarginalProgram nn2 = program_from_json(program_to_json(nn));
  EXPECT_EQ(nn2.scope.resolve(4, 2), nn.scope.resolve(4, 2));
  EXPECT_EQ(solve(nn2).status, SdpStatus::Feasible);
}

TEST(ProgramJson, Errors) {
  EXPECT_THROW(program_from_json("{}"), ArgumentError);
  EXPECT_THROW(program_from_json("[1"), ArgumentError);
  EXPECT_THROW(program_from_json(R"({"target": "ring:5", "k": 9})"), ArgumentError);
  EXPECT_THROW(program_from_json(R"({"target": "ring:5", "k": "two"})"), ArgumentError);
  EXPECT_THROW(program_from_json(R"({"target": "ring:5", "scope": "far"})"), ArgumentError);
  EXPECT_THROW(program_from_json(R"({"target": "ring:5", "delta": -1})"), ArgumentError);
}
