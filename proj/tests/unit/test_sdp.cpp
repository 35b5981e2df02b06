#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "max2csp/exact.hpp"
#include "max2csp/generators.hpp"
#include "max2csp/instance_io.hpp"
#include "max2csp/sdp.hpp"
#include "max2csp/text.hpp"

namespace max2csp {
namespace {

void expect_feasible(const SolveResult& r, double tol = 1e-5) {
  EXPECT_LE(r.report.max_norm_violation, 1e-12);
  EXPECT_LE(r.report.max_ortho_violation, 1e-12);
  EXPECT_GE(r.report.min_constraint_pair_inner, -tol);
}

TEST(SdpProperty, EmbeddingObjectiveEqualsScore) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = testing::random_small_instance(rng, 5, 4);
    const AtomicInstance atomic = normalize(inst);
    std::uniform_int_distribution<int> val(0, inst.domain_size() - 1);
    Assignment z(std::vector<int>(inst.num_variables()));
    for (auto& v : z.values) v = val(rng);
    EXPECT_NEAR(objective(embed(z, atomic), atomic), score(inst, z), 1e-12);
    EXPECT_NEAR(objective(embed_in_dim(z, inst.num_variables(), inst.domain_size(), 3), atomic), score(inst, z), 1e-12);
    const FeasibilityReport f = feasibility(embed(z, atomic), atomic, NonnegScope::kAll);
    EXPECT_TRUE(f.feasible(0.0));
  }
}

TEST(Sdp, EmbedRejectsPartialAssignments) {
  const AtomicInstance atomic = normalize(example_instance());
  EXPECT_THROW(embed(Assignment::unassigned(3), atomic), std::invalid_argument);
  EXPECT_THROW(embed(Assignment(std::vector<int>{0, 1}), atomic), std::invalid_argument);
}

TEST(Sdp, SingleEqualityHasValueOne) {
  const Instance inst(2, 3, {{0, 1, {{0, 0}, {1, 1}, {2, 2}}, 1.0}});
  const SolveResult r = solve(normalize(inst), SolverConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.report.objective, 1.0, 1e-6);
  expect_feasible(r);
}

TEST(Sdp, ExampleValuesPerScope) {
  // Reference values from tools/sdp_crosscheck.py (full SDP through SCS).
  const AtomicInstance atomic = normalize(example_instance());
  SolverConfig cfg;
  const SolveResult atoms = solve(atomic, cfg);
  EXPECT_TRUE(atoms.converged);
  EXPECT_NEAR(atoms.report.objective, 4.177064529, 1e-5);
  expect_feasible(atoms);
  cfg.scope = NonnegScope::kEdges;
  const SolveResult edges = solve(atomic, cfg);
  EXPECT_TRUE(edges.converged);
  EXPECT_NEAR(edges.report.objective, 4.071272162, 1e-5);
  EXPECT_GE(feasibility(edges.solution, atomic, NonnegScope::kEdges).min_constraint_pair_inner, -1e-5);
  cfg.scope = NonnegScope::kAll;
  const SolveResult all = solve(atomic, cfg);
  EXPECT_LE(all.report.objective, edges.report.objective + 1e-5);
  EXPECT_GE(all.report.objective, 4.0 - 1e-9);
}

TEST(SdpProperty, RelaxationBoundsOptimum) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 25; ++rep) {
    const Instance inst = testing::random_small_instance(rng, 5, 3);
    const AtomicInstance atomic = normalize(inst);
    SolverConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(rep);
    const SolveResult r = solve(atomic, cfg);
    const double opt = brute_force(inst).value;
    EXPECT_GE(r.report.objective, opt - 1e-6);
    EXPECT_LE(r.report.objective, atomic.total_weight + 1e-9);
    EXPECT_GE(r.best_integral, 0.0);
    EXPECT_LE(r.best_integral, opt + 1e-9);
    EXPECT_NEAR(objective(r.solution, atomic), r.report.objective, 1e-9);
    expect_feasible(r);
  }
}

TEST(Sdp, HintsAreRespected) {
  const GeneratedInstance g = gen_unique_game(12, 5, 40, 3, true);
  const AtomicInstance atomic = normalize(g.instance);
  SolverConfig cfg;
  cfg.candidate_trials = 0;
  const Assignment hint = *g.planted;
  const SolveResult r = solve(atomic, cfg, std::span<const Assignment>(&hint, 1));
  EXPECT_EQ(r.best_integral, g.instance.total_weight());
  EXPECT_NEAR(r.report.objective, g.instance.total_weight(), 1e-6);
  const Assignment partial = Assignment::unassigned(12);
  EXPECT_THROW(solve(atomic, cfg, std::span<const Assignment>(&partial, 1)), std::invalid_argument);
}

TEST(Sdp, Deterministic) {
  const AtomicInstance atomic = normalize(gen_2lin(10, 4, 30, 5));
  SolverConfig cfg;
  cfg.seed = 9;
  const SolveResult a = solve(atomic, cfg);
  const SolveResult b = solve(atomic, cfg);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.inner_steps, b.inner_steps);
}

TEST(Sdp, ConfigValidation) {
  const AtomicInstance atomic = normalize(example_instance());
  auto bad = [&](auto mutate) {
    SolverConfig cfg;
    mutate(cfg);
    EXPECT_THROW(solve(atomic, cfg), std::invalid_argument);
  };
  bad([](SolverConfig& c) { c.dim = 1; });
  bad([](SolverConfig& c) { c.max_outer = 0; });
  bad([](SolverConfig& c) { c.penalty_growth = 1.0; });
  bad([](SolverConfig& c) { c.tol_feas = 0.0; });
  bad([](SolverConfig& c) { c.candidate_trials = -1; });
}

TEST(Sdp, ScopeNamesAndDefaultDim) {
  for (auto s : {NonnegScope::kAtoms, NonnegScope::kEdges, NonnegScope::kAll})
    EXPECT_EQ(parse_scope(to_string(s)), s);
  EXPECT_THROW(parse_scope("pairs"), std::invalid_argument);
  EXPECT_EQ(default_dim(3, 3), 9);
  EXPECT_EQ(default_dim(30, 4), 50);
  EXPECT_EQ(default_dim(2, 64), 64);
  EXPECT_EQ(default_dim(30, 16, NonnegScope::kEdges), 96);
  EXPECT_EQ(default_dim(3, 3, NonnegScope::kAll), 9);
}

TEST(Sdp, SolutionTextRoundTrip) {
  const AtomicInstance atomic = normalize(gen_2lin(5, 3, 8, 1));
  const SolveResult r = solve(atomic, SolverConfig{});
  const std::string text = serialize_solution(r.solution);
  EXPECT_EQ(parse_solution(text), r.solution);
  testing::TempDir dir("sdp");
  save_solution(dir.file("x.sol"), r.solution);
  EXPECT_EQ(load_solution(dir.file("x.sol")), r.solution);
}

TEST(Sdp, SolutionTextErrors) {
  EXPECT_THROW(parse_solution(""), ParseError);
  EXPECT_THROW(parse_solution("SDPSOL 2 1 2 1\n"), ParseError);
  EXPECT_THROW(parse_solution("SDPSOL 1 1 2 1\nV 0 0 1\n"), ParseError);
  EXPECT_THROW(parse_solution("SDPSOL 1 1 2 1\nV 0 0 1\nV 0 0 1\n"), ParseError);
  EXPECT_THROW(parse_solution("SDPSOL 1 1 2 1\nV 0 0 1\nV 0 5 1\n"), ParseError);
  EXPECT_THROW(parse_solution("SDPSOL 1 1 2 2\nV 0 0 1\nV 0 1 1\n"), ParseError);
  EXPECT_NO_THROW(parse_solution("SDPSOL 1 1 2 1\nV 0 1 0\nV 0 0 1\n"));
}

}  // namespace
}  // namespace max2csp
