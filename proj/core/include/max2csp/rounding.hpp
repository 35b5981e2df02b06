#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "max2csp/instance.hpp"
#include "max2csp/random.hpp"
#include "max2csp/sdp.hpp"

namespace max2csp {

/// Vectors shorter than this are treated as zero by the shortlist rule.
inline constexpr double kZeroNorm = 1e-9;

/// Row-major n x R table of per-(variable, value) reals.
struct LabelTable {
  int n = 0;
  int R = 0;
  std::vector<double> values;

  LabelTable() = default;
  LabelTable(int n_, int R_) : n(n_), R(R_), values(static_cast<std::size_t>(n_) * R_, 0.0) {}
  double& operator()(int i, int a) { return values[static_cast<std::size_t>(i) * R + a]; }
  double operator()(int i, int a) const { return values[static_cast<std::size_t>(i) * R + a]; }
};

using Shortlists = std::vector<std::vector<int>>;

/// Everything one shortlist-rounding trial produced.
struct RoundingState {
  LabelTable p;  ///< target probabilities
  LabelTable t;  ///< thresholds, tail(t) = p
  std::vector<double> g;
  Shortlists lists;
};

/// What to do with a variable whose shortlist came out empty.
enum class EmptyPolicy {
  kUniform,  ///< uniform random value
  kNone,     ///< leave the variable unassigned
};

std::string to_string(EmptyPolicy policy);
EmptyPolicy parse_empty_policy(const std::string& s);

/// Angle data of a vector pair; cos_theta is clamped to [0, 1] and is 0 when
/// either norm is below kZeroNorm.
struct PairGeometry {
  double inner = 0.0;
  double norm_first = 0.0;
  double norm_second = 0.0;
  double cos_theta = 0.0;
};
PairGeometry pair_geometry(const VectorSolution& sol, int i, int a, int j, int b);

/// p_ia = (|x_ia| / sqrt(R) + 1/R) / 2.
LabelTable target_probs(const VectorSolution& sol);

/// t_ia = inv_tail(p_ia). Throws std::domain_error for entries outside (0, 1).
LabelTable thresholds(const LabelTable& p);

/// L_i = {a : <x_ia, g> >= |x_ia| t_ia}. Labels with |x_ia| < kZeroNorm join
/// by an independent coin of probability p_ia drawn from `coins`.
Shortlists shortlists(const VectorSolution& sol, const LabelTable& p, const LabelTable& t,
                      std::span<const double> g, Rng& coins);

/// Uniform pick from each shortlist; empty lists follow `policy`.
Assignment select(const Shortlists& lists, int R, Rng& rng,
                  EmptyPolicy policy = EmptyPolicy::kUniform);

/// Precomputed probabilities and thresholds for repeated trials on one solution.
class ShortlistRounder {
 public:
  explicit ShortlistRounder(const VectorSolution& sol, EmptyPolicy policy = EmptyPolicy::kUniform);

  const VectorSolution& solution() const { return *sol_; }
  const LabelTable& probs() const { return p_; }
  const LabelTable& thresholds() const { return t_; }

  /// One trial. g comes from its own stream so the auxiliary coins and the
  /// selection never shift it: three sub-seeds are drawn from `rng`.
  Assignment round(Rng& rng, RoundingState* state = nullptr) const;

  /// Shortlists for a given g (coins drawn from `coins`).
  Shortlists lists_for(std::span<const double> g, Rng& coins) const;

 private:
  const VectorSolution* sol_;
  EmptyPolicy policy_;
  LabelTable p_;
  LabelTable t_;
};

/// target_probs -> thresholds -> one shared Gaussian g -> shortlists -> select.
std::pair<Assignment, RoundingState> round_once(const VectorSolution& sol, Rng& rng,
                                                EmptyPolicy policy = EmptyPolicy::kUniform);

struct RoundingStats {
  std::size_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation of the trial scores
  double max = 0.0;
  std::vector<std::uint64_t> shortlist_histogram;  ///< index = |L_i|, 0..R
  double mean_shortlist_size = 0.0;
  double empty_rate = 0.0;  ///< fraction of (trial, variable) with empty L_i
};

/// Best of `trials` independent round_once calls; trial k uses the stream
/// derive_seed(seed, kRoundingTrial, k), so results do not depend on how
/// trials are scheduled.
std::pair<Assignment, RoundingStats> best_of(const VectorSolution& sol, const AtomicInstance& atomic,
                                             std::size_t trials, std::uint64_t seed,
                                             EmptyPolicy policy = EmptyPolicy::kUniform);

/// Independent per-variable sampling with Pr[Z_i = a] = |x_ia| / sum_b |x_ib|;
/// all-zero variables get a uniform value.
Assignment naive_round(const VectorSolution& sol, Rng& rng);

/// Mean and spread of the naive rounding over `trials` seeded trials.
RoundingStats naive_stats(const VectorSolution& sol, const AtomicInstance& atomic,
                          std::size_t trials, std::uint64_t seed);

/// Closed-form expected score of the naive rounding.
double naive_expected_score(const VectorSolution& sol, const AtomicInstance& atomic);

struct PairEstimate {
  double estimate = 0.0;
  double sigma = 0.0;  ///< binomial standard error of the estimate
  double p_first = 0.0;
  double p_second = 0.0;
  std::size_t samples = 0;
  double lower() const { return estimate - 3.0 * sigma; }
  double upper() const { return estimate + 3.0 * sigma; }
};

/// Monte-Carlo estimate of Pr[a in L_i and b in L_j]. Throws
/// std::invalid_argument if i == j or samples < 1000.
PairEstimate pair_prob_estimate(const VectorSolution& sol, int i, int a, int j, int b,
                                std::size_t samples, std::uint64_t seed);

/// Empirical Pr[a in L_i] for every label over `trials` draws of g.
LabelTable membership_frequencies(const VectorSolution& sol, std::size_t trials,
                                  std::uint64_t seed);

/// Per-atom joint-membership statistics over shared trials.
struct AtomProbe {
  std::size_t atom = 0;  ///< index into AtomicInstance::atoms
  double inner = 0.0;
  std::uint64_t joint = 0;        ///< trials with a in L_i and b in L_j
  std::uint64_t joint_small = 0;  ///< ... and |L_i| <= U and |L_j| <= U
  double joint_prob = 0.0;
  /// joint_prob * R / (ln R * inner), the constant implied by the lower bound.
  double lower_bound_constant = 0.0;
  /// joint_small / joint, or -1 when joint == 0.
  double small_given_joint = -1.0;
};

struct AtomProbeReport {
  std::size_t trials = 0;
  int U = 0;
  std::vector<AtomProbe> atoms;
};

/// Probes every atom whose inner product is at least `min_inner`.
AtomProbeReport probe_atoms(const VectorSolution& sol, const AtomicInstance& atomic,
                            std::size_t trials, int U, double min_inner, std::uint64_t seed);

/// Text dump: "ROUND 1 <n> <R> <dim>", then "G" with g, then per variable
/// "P i ...", "T i ...", "L i k values...".
std::string dump_state(const RoundingState& state);

}  // namespace max2csp
