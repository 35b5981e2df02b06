#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "max2csp/instance.hpp"

namespace max2csp {

/// One vector x[i][a] in R^dim per (variable, value) pair, stored
/// contiguously: the block of variable i is a dim x R column-major matrix.
class VectorSolution {
 public:
  VectorSolution() = default;
  VectorSolution(int n, int R, int dim);

  int num_variables() const { return n_; }
  int domain_size() const { return R_; }
  int dim() const { return dim_; }

  std::span<double> vec(int i, int a);
  std::span<const double> vec(int i, int a) const;
  std::span<double> block(int i);
  std::span<const double> block(int i) const;

  double inner(int i, int a, int j, int b) const;
  double norm(int i, int a) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  friend bool operator==(const VectorSolution&, const VectorSolution&) = default;

 private:
  int n_ = 0;
  int R_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

/// Which pairs (i, a, j, b), i != j, carry the constraint <x_ia, x_jb> >= 0.
enum class NonnegScope {
  kAtoms,  ///< only pairs that appear as atoms
  kEdges,  ///< every value pair of every constrained variable pair
  kAll,    ///< every value pair of every variable pair
};

std::string to_string(NonnegScope scope);
NonnegScope parse_scope(const std::string& s);

struct SolverConfig {
  int dim = 0;  ///< 0 selects default_dim(n, R, scope)
  int max_outer = 40;
  int max_inner = 400;
  double penalty_init = 10.0;
  double penalty_growth = 4.0;
  double tol_feas = 1e-6;
  double tol_obj = 1e-7;
  std::uint64_t seed = 1;
  NonnegScope scope = NonnegScope::kAtoms;
  int candidate_trials = 100;  ///< random integral starts, each hill-climbed

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// min(n R, 50), raised to R so every value can own a direction. The edges
/// and all scopes add many nonnegativity constraints and stall at low rank,
/// so they get min(n R, max(50, 6 R)).
int default_dim(int n, int R, NonnegScope scope = NonnegScope::kAtoms);

struct FeasibilityReport {
  double max_norm_violation = 0.0;   ///< max_i |sum_a |x_ia|^2 - 1|
  double max_ortho_violation = 0.0;  ///< max_i max_{a != b} |<x_ia, x_ib>|
  double min_constraint_pair_inner = 0.0;  ///< min <x_ia, x_jb> over the checked pairs
  double objective = 0.0;

  bool feasible(double tol) const {
    return max_norm_violation <= tol && max_ortho_violation <= tol &&
           min_constraint_pair_inner >= -tol;
  }
};

/// Integral embedding: dim 1, x[i][z_i] = 1 and every other vector 0.
/// Throws std::invalid_argument unless z is fully assigned and fits.
VectorSolution embed(const Assignment& z, const AtomicInstance& atomic);

/// Same embedding placed along the first axis of R^dim.
VectorSolution embed_in_dim(const Assignment& z, int n, int R, int dim);

/// sum over atoms of weight * <x_ia, x_jb>.
double objective(const VectorSolution& sol, const AtomicInstance& atomic);

/// Worst violation of each constraint family. Nonnegativity is checked on
/// the pairs selected by `scope`; for kAtoms with no atoms the minimum is 0.
FeasibilityReport feasibility(const VectorSolution& sol, const AtomicInstance& atomic,
                              NonnegScope scope = NonnegScope::kAtoms);

struct SolveResult {
  VectorSolution solution;
  FeasibilityReport report;
  bool converged = false;
  int outer_rounds = 0;
  int inner_steps = 0;
  double best_integral = 0.0;  ///< best hill-climbed or hinted integral score
  bool integral_fallback = false;  ///< returned solution is that integral embedding
};

/// Maximizes the vector-program objective over factorized vectors.
///
/// Per-variable orthogonality and unit mass hold exactly after every step
/// (Gram-Schmidt retraction of a tangent-projected gradient step). The
/// nonnegativity constraints selected by cfg.scope go through an augmented
/// Lagrangian whose penalty grows between outer rounds while the worst
/// violation fails to shrink. The result is never worse than the embedding
/// of any hinted assignment or of the best of cfg.candidate_trials
/// hill-climbed random assignments. Non-convergence is reported through
/// SolveResult::converged, not thrown.
SolveResult solve(const AtomicInstance& atomic, const SolverConfig& cfg,
                  std::span<const Assignment> hints = {});

// Solution text format:
//   SDPSOL 1 <n> <R> <dim>
//   V <i> <a> <dim reals>          (one line per (i, a), any order)
std::string serialize_solution(const VectorSolution& sol);
VectorSolution parse_solution(std::string_view text);
void save_solution(const std::string& path, const VectorSolution& sol);
VectorSolution load_solution(const std::string& path);

}  // namespace max2csp
