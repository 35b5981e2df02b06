#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "max2csp/exact.hpp"
#include "max2csp/sdp.hpp"

namespace max2csp {

enum class Family { kExample, k2Lin, kUniqueGame, kRandom };

std::string to_string(Family f);

/// One `instance` directive; expands to `count` instances.
struct InstanceSpec {
  Family family = Family::kExample;
  int n = 3;
  int R = 3;
  int m = 5;
  double density = 0.5;  ///< kRandom only
  bool planted = false;  ///< kUniqueGame only
  int count = 1;
};

// Config text format:
//   EXP 1
//   suite <name>
//   seed <u64>
//   trials <T>
//   budget <u64>                 (exact search limit on R^n)
//   threads <k>
//   out <path>
//   solver <key> <value>         (dim, max_outer, max_inner, penalty_init,
//                                 penalty_growth, tol_feas, tol_obj, scope,
//                                 candidate_trials)
//   instance example [count]
//   instance 2lin <n> <R> <m> [count]
//   instance ug <n> <R> <m> planted|free [count]
//   instance random <n> <R> <m> <density> [count]
struct ExperimentConfig {
  std::string suite = "default";
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::uint64_t budget = kDefaultExactBudget;
  int threads = 1;
  std::string out;
  bool timing = false;  ///< fill wall_ms; off by default so reruns are byte-identical
  SolverConfig solver;
  std::vector<InstanceSpec> instances;

  /// Throws std::invalid_argument unless trials >= 1, threads >= 1 and at
  /// least one instance is specified with valid parameters.
  void validate() const;
};

/// Throws ParseError on malformed text.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentRecord {
  std::string suite;
  std::size_t instance_id = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int R = 0;
  int m = 0;
  std::size_t atoms = 0;
  std::optional<double> opt_exact;
  double sdp_value = 0.0;
  bool sdp_converged = false;
  double naive_mean = 0.0;
  double shortlist_mean = 0.0;
  double shortlist_best = 0.0;
  double ratio_naive = 0.0;
  double ratio_shortlist = 0.0;
  double measured_kappa = 0.0;
  double mean_shortlist_size = 0.0;
  double empty_shortlist_rate = 0.0;
  std::optional<double> wall_ms;

  // Not part of the CSV.
  Family family = Family::kExample;
  double naive_stddev = 0.0;
  double shortlist_stddev = 0.0;
  std::size_t trials = 0;
};

/// The instances a config expands to, in id order, with their seeds.
struct ExpandedInstance {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  InstanceSpec spec;
};
std::vector<ExpandedInstance> expand(const ExperimentConfig& cfg);

/// Generate -> solve -> round (naive and shortlist) -> compare, one record
/// per instance, ordered by id. Instances run on cfg.threads workers; every
/// random choice derives from (cfg.seed, id) so the output does not depend
/// on scheduling.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

/// One record, computed alone.
ExperimentRecord run_instance(const ExperimentConfig& cfg, const ExpandedInstance& inst);

inline constexpr std::string_view kCsvHeader =
    "suite,instance_id,seed,n,R,m,atoms,opt_exact,sdp_value,sdp_converged,naive_mean,"
    "shortlist_mean,shortlist_best,ratio_naive,ratio_shortlist,measured_kappa,"
    "mean_shortlist_size,empty_shortlist_rate,wall_ms";

/// RFC-4180 field quoting.
std::string csv_field(std::string_view s);
std::string to_csv(const std::vector<ExperimentRecord>& records);
void write_csv(const std::string& path, const std::vector<ExperimentRecord>& records);

}  // namespace max2csp
