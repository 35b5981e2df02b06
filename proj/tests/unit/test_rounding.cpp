#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "max2csp/gaussian.hpp"
#include "max2csp/generators.hpp"
#include "max2csp/rounding.hpp"

namespace max2csp {
namespace {

// Random solution meeting unit mass and per-variable orthogonality: Gaussian
// columns, Gram-Schmidt, random norms scaled to total mass 1. Some columns
// are zeroed when `zeros` is set.
VectorSolution random_feasible(int n, int R, int dim, std::uint64_t seed, bool zeros = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::bernoulli_distribution drop(0.3);
  VectorSolution sol(n, R, dim);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(R);
    double mass = 0.0;
    for (int a = 0; a < R; ++a) {
      w[a] = (zeros && a > 0 && drop(rng)) ? 0.0 : unit(rng);
      mass += w[a] * w[a];
    }
    for (int a = 0; a < R; ++a) {
      auto x = sol.vec(i, a);
      for (double& v : x) v = normal(rng);
      for (int b = 0; b < a; ++b) {
        const auto y = sol.vec(i, b);
        const double ny = gaussian::dot(y, y);
        if (ny == 0.0) continue;
        const double c = gaussian::dot(x, y) / ny;
        for (int k = 0; k < dim; ++k) x[k] -= c * y[k];
      }
      const double nx = gaussian::norm(x);
      for (double& v : x) v *= w[a] / std::sqrt(mass) / nx;
    }
  }
  return sol;
}

TEST(Rounding, TargetProbabilitiesByHand) {
  VectorSolution sol(1, 4, 2);
  sol.vec(0, 0)[0] = std::sqrt(0.64);
  sol.vec(0, 1)[1] = std::sqrt(0.36);
  const LabelTable p = target_probs(sol);
  EXPECT_NEAR(p(0, 0), 0.5 * (0.8 / 2 + 0.25), 1e-15);
  EXPECT_NEAR(p(0, 1), 0.5 * (0.6 / 2 + 0.25), 1e-15);
  EXPECT_NEAR(p(0, 2), 0.125, 1e-15);
  const LabelTable t = thresholds(p);
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(gaussian::tail(t(0, a)), p(0, a), 1e-14);
}

TEST(RoundingProperty, TargetProbabilitiesSumAtMostOne) {
  // sum_a |x_ia| <= sqrt(R) by Cauchy-Schwarz under unit mass.
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int R = 2 + static_cast<int>(s % 7);
    const VectorSolution sol = random_feasible(3, R, R + 1, s, s % 2 == 0);
    const LabelTable p = target_probs(sol);
    for (int i = 0; i < 3; ++i) {
      double sum = 0.0;
      for (int a = 0; a < R; ++a) {
        EXPECT_GE(p(i, a), 0.5 / R - 1e-15);
        sum += p(i, a);
      }
      EXPECT_LE(sum, 1.0 + 1e-12);
    }
  }
}

TEST(Rounding, PairGeometry) {
  VectorSolution sol(2, 2, 2);
  sol.vec(0, 0)[0] = 1.0;
  sol.vec(1, 1)[0] = 0.6;
  sol.vec(1, 1)[1] = 0.8;
  const PairGeometry g = pair_geometry(sol, 0, 0, 1, 1);
  EXPECT_NEAR(g.inner, 0.6, 1e-15);
  EXPECT_NEAR(g.cos_theta, 0.6, 1e-15);
  EXPECT_EQ(pair_geometry(sol, 0, 1, 1, 1).cos_theta, 0.0);  // zero vector
}

TEST(Rounding, MembershipRule) {
  VectorSolution sol(1, 2, 2);
  sol.vec(0, 0)[0] = std::sqrt(0.5);
  sol.vec(0, 1)[1] = std::sqrt(0.5);
  LabelTable p(1, 2), t(1, 2);
  p(0, 0) = p(0, 1) = 0.3;
  t(0, 0) = t(0, 1) = 1.0;
  Rng coins(1);
  // <x, g> = sqrt(.5) g_a against sqrt(.5) * 1: member iff g_a >= 1.
  const std::vector<double> g{1.0, 0.999};
  const Shortlists L = shortlists(sol, p, t, g, coins);
  ASSERT_EQ(L.size(), 1u);
  EXPECT_EQ(L[0], std::vector<int>{0});
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(shortlists(sol, p, t, wrong, coins), std::invalid_argument);
}

TEST(Rounding, ZeroVectorsJoinByCoin) {
  VectorSolution sol(1, 2, 1);
  sol.vec(0, 0)[0] = 1.0;  // value 1 is the zero vector
  LabelTable p(1, 2), t(1, 2);
  p(0, 0) = 0.5;
  p(0, 1) = 0.2;
  t(0, 0) = 0.0;
  t(0, 1) = gaussian::inv_tail(0.2);
  Rng coins(3);
  const std::vector<double> g{-1.0};
  const int N = 40000;
  int hits = 0;
  for (int k = 0; k < N; ++k) {
    const auto L = shortlists(sol, p, t, g, coins);
    for (int a : L[0]) hits += a == 1;
    for (int a : L[0]) EXPECT_NE(a, 0);
  }
  EXPECT_NEAR(hits / double(N), 0.2, 4 * std::sqrt(0.16 / N));
}

TEST(Rounding, SelectPolicies) {
  const Shortlists lists{{2}, {}, {0, 3}};
  Rng rng(5);
  std::set<int> seen;
  for (int k = 0; k < 200; ++k) {
    const Assignment z = select(lists, 4, rng);
    EXPECT_EQ(z[0], 2);
    EXPECT_TRUE(z[1] >= 0 && z[1] < 4);
    EXPECT_TRUE(z[2] == 0 || z[2] == 3);
    seen.insert(z[2]);
  }
  EXPECT_EQ(seen.size(), 2u);
  const Assignment none = select(lists, 4, rng, EmptyPolicy::kNone);
  EXPECT_EQ(none[1], Assignment::kUnassigned);
  EXPECT_EQ(parse_empty_policy("none"), EmptyPolicy::kNone);
  EXPECT_EQ(to_string(parse_empty_policy("uniform")), "uniform");
  EXPECT_THROW(parse_empty_policy("random"), std::invalid_argument);
}

TEST(Rounding, Deterministic) {
  const VectorSolution sol = random_feasible(8, 5, 6, 11, true);
  const Instance inst = gen_2lin(8, 5, 20, 2);
  const AtomicInstance atomic = normalize(inst);
  const auto a = best_of(sol, atomic, 300, 42);
  const auto b = best_of(sol, atomic, 300, 42);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second.mean, b.second.mean);
  EXPECT_EQ(a.second.shortlist_histogram, b.second.shortlist_histogram);
  EXPECT_NE(best_of(sol, atomic, 300, 43).second.mean, a.second.mean);
  Rng r1(7), r2(7);
  RoundingState s1, s2;
  ShortlistRounder rounder(sol);
  EXPECT_EQ(rounder.round(r1, &s1), rounder.round(r2, &s2));
  EXPECT_EQ(dump_state(s1), dump_state(s2));
}

TEST(Rounding, BestOfStatistics) {
  const VectorSolution sol = random_feasible(6, 4, 5, 2);
  const AtomicInstance atomic = normalize(gen_2lin(6, 4, 15, 9));
  const auto [z, st] = best_of(sol, atomic, 500, 1);
  EXPECT_EQ(st.trials, 500u);
  EXPECT_EQ(score(atomic, z), st.max);
  EXPECT_LE(st.mean, st.max);
  EXPECT_GE(st.stddev, 0.0);
  ASSERT_EQ(st.shortlist_histogram.size(), 5u);
  std::uint64_t total = 0;
  double size_sum = 0.0;
  for (std::size_t k = 0; k < st.shortlist_histogram.size(); ++k) {
    total += st.shortlist_histogram[k];
    size_sum += static_cast<double>(k * st.shortlist_histogram[k]);
  }
  EXPECT_EQ(total, 500u * 6u);
  EXPECT_NEAR(st.mean_shortlist_size, size_sum / total, 1e-12);
  EXPECT_NEAR(st.empty_rate, st.shortlist_histogram[0] / double(total), 1e-12);
  EXPECT_THROW(best_of(sol, atomic, 0, 1), std::invalid_argument);
}

TEST(RoundingProperty, MarginalsMatchTargets) {
  // Each label is in L_i with probability p_ia: for nonzero vectors
  // <x, g>/|x| is standard normal, for zero vectors the coin has bias p_ia.
  const VectorSolution sol = random_feasible(4, 5, 6, 21, true);
  const std::size_t N = 40000;
  const LabelTable f = membership_frequencies(sol, N, 8);
  const LabelTable p = target_probs(sol);
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 5; ++a)
      EXPECT_NEAR(f(i, a), p(i, a), 4.5 * std::sqrt(p(i, a) * (1 - p(i, a)) / N)) << i << ' ' << a;
}

TEST(Rounding, IntegralSolutionShortlist) {
  // Embedded assignment: the chosen value has norm 1 and joins exactly when
  // g_0 >= t; the rest are zero vectors joining by coin.
  const Assignment z(std::vector<int>{1, 0, 2});
  const VectorSolution sol = embed_in_dim(z, 3, 3, 2);
  const LabelTable p = target_probs(sol);
  EXPECT_NEAR(p(0, 1), 0.5 * (1 / std::sqrt(3.0) + 1.0 / 3), 1e-15);
  EXPECT_NEAR(p(0, 0), 1.0 / 6, 1e-15);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(naive_round(sol, rng), z);
}

TEST(Rounding, NaiveExpectationMatchesSimulation) {
  const VectorSolution sol = random_feasible(6, 4, 5, 33, true);
  const AtomicInstance atomic = normalize(gen_random_2csp(6, 4, 12, 0.4, 3));
  // Hand oracle: independent per-variable laws |x_ia| / sum_b |x_ib|.
  double expect = 0.0;
  for (const Atom& at : atomic.atoms) {
    auto pr = [&](int i, int a) {
      double s = 0.0;
      for (int b = 0; b < 4; ++b) s += sol.norm(i, b);
      return sol.norm(i, a) / s;
    };
    expect += at.weight * pr(at.i, at.a) * pr(at.j, at.b);
  }
  EXPECT_NEAR(naive_expected_score(sol, atomic), expect, 1e-12);
  const RoundingStats st = naive_stats(sol, atomic, 20000, 4);
  EXPECT_NEAR(st.mean, expect, 4 * st.stddev / std::sqrt(20000.0));
  EXPECT_EQ(st.mean_shortlist_size, 1.0);
  EXPECT_EQ(st.empty_rate, 0.0);
}

TEST(Rounding, NaiveAllZeroVariableIsUniform) {
  VectorSolution sol(1, 3, 1);
  Rng rng(1);
  std::vector<int> count(3);
  for (int k = 0; k < 3000; ++k) ++count[naive_round(sol, rng)[0]];
  for (int c : count) EXPECT_NEAR(c, 1000, 4 * std::sqrt(3000 * 2.0 / 9));
}

TEST(Rounding, PairEstimateOrthogonalIsProduct) {
  VectorSolution sol(2, 2, 2);
  sol.vec(0, 0)[0] = 1.0;
  sol.vec(1, 0)[1] = 1.0;
  const PairEstimate e = pair_prob_estimate(sol, 0, 0, 1, 0, 200000, 5);
  const double p = 0.5 * (1 / std::sqrt(2.0) + 0.5);
  EXPECT_NEAR(e.p_first, p, 1e-15);
  EXPECT_NEAR(e.estimate, p * p, 4 * e.sigma);
  EXPECT_LT(e.lower(), e.upper());
  EXPECT_THROW(pair_prob_estimate(sol, 0, 0, 0, 1, 200000, 5), std::invalid_argument);
  EXPECT_THROW(pair_prob_estimate(sol, 0, 0, 1, 0, 999, 5), std::invalid_argument);
}

TEST(Rounding, PairEstimateParallelIsMinimum) {
  // Identical directions: joint membership is membership at the larger threshold.
  VectorSolution sol(2, 2, 2);
  sol.vec(0, 0)[0] = std::sqrt(0.8);
  sol.vec(0, 1)[1] = std::sqrt(0.2);
  sol.vec(1, 0)[0] = std::sqrt(0.3);
  sol.vec(1, 1)[1] = std::sqrt(0.7);
  const PairEstimate e = pair_prob_estimate(sol, 0, 0, 1, 0, 200000, 6);
  EXPECT_NEAR(e.estimate, std::min(e.p_first, e.p_second), 4 * e.sigma);
}

TEST(Rounding, ProbeAtoms) {
  const Assignment z(std::vector<int>{0, 1});
  const VectorSolution sol = embed_in_dim(z, 2, 3, 1);
  const Instance inst(2, 3, {{0, 1, {{0, 1}, {1, 1}}, 2.0}});
  const AtomicInstance atomic = normalize(inst);
  const AtomProbeReport rep = probe_atoms(sol, atomic, 20000, 2, 0.5, 3);
  ASSERT_EQ(rep.atoms.size(), 1u);  // only the satisfied atom has inner 1
  const AtomProbe& pr = rep.atoms[0];
  EXPECT_EQ(pr.inner, 1.0);
  // Both unit vectors point along the same axis with equal thresholds.
  const double p = 0.5 * (1 / std::sqrt(3.0) + 1.0 / 3);
  EXPECT_NEAR(pr.joint_prob, p, 4 * std::sqrt(p * (1 - p) / 20000));
  EXPECT_NEAR(pr.lower_bound_constant, pr.joint_prob * 3 / std::log(3.0), 1e-12);
  EXPECT_GE(pr.small_given_joint, 0.0);
  EXPECT_LE(pr.small_given_joint, 1.0);
  EXPECT_LE(pr.joint_small, pr.joint);
  EXPECT_TRUE(probe_atoms(sol, atomic, 100, 2, 2.0, 3).atoms.empty());
}

TEST(Rounding, DumpStateFormat) {
  const VectorSolution sol = random_feasible(2, 3, 4, 1);
  Rng rng(9);
  const auto [z, state] = round_once(sol, rng);
  const std::string text = dump_state(state);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "ROUND 1 2 3 4");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "G ");
  std::vector<std::string> tags;
  while (std::getline(in, line)) tags.push_back(line.substr(0, 4));
  EXPECT_EQ(tags, (std::vector<std::string>{"P 0 ", "T 0 ", "L 0 ", "P 1 ", "T 1 ", "L 1 "}));
  for (int i = 0; i < 2; ++i)
    for (int a : state.lists[i]) EXPECT_TRUE(a >= 0 && a < 3);
  for (int i = 0; i < 2; ++i) {
    if (!state.lists[i].empty())
      EXPECT_NE(std::find(state.lists[i].begin(), state.lists[i].end(), z[i]), state.lists[i].end());
  }
}

TEST(RoundingProperty, NonnegativeInnerMeansPositiveCorrelation) {
  const VectorSolution sol = random_feasible(4, 3, 3, 41);
  const std::size_t N = 20000;
  int pairs = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (sol.inner(0, a, 1, b) < 0.0) continue;
      ++pairs;
      const PairEstimate e = pair_prob_estimate(sol, 0, a, 1, b, N, 100 + 3 * a + b);
      EXPECT_GE(e.estimate, e.p_first * e.p_second - 3 * e.sigma) << a << ' ' << b;
    }
  EXPECT_GT(pairs, 0);
}

TEST(RoundingProperty, ShortlistBeatsNaiveForModerateR) {
  const AtomicInstance atomic = normalize(gen_2lin(30, 8, 120, 17));
  const SolveResult r = solve(atomic, SolverConfig{});
  const RoundingStats naive = naive_stats(r.solution, atomic, 3000, 2);
  const RoundingStats shortlist = best_of(r.solution, atomic, 3000, 2).second;
  const double sigma = std::hypot(naive.stddev, shortlist.stddev) / std::sqrt(3000.0);
  EXPECT_GE(shortlist.mean, naive.mean - 3 * sigma);
}

}  // namespace
}  // namespace max2csp
