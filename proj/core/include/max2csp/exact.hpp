#pragma once

#include <cstdint>
#include <stdexcept>

#include "max2csp/instance.hpp"

namespace max2csp {

struct ExactResult {
  double value = 0.0;
  Assignment witness;
  std::uint64_t explored = 0;  ///< search nodes visited
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultExactBudget = 100'000'000;

/// Exact optimum by depth-first branch and bound.
///
/// Variables are branched in descending incident weight; values in
/// descending weight satisfied against the fixed prefix. A node is pruned
/// when its fixed weight plus the weight of every constraint that can still
/// be satisfied does not beat the incumbent. Throws BudgetExceeded when
/// R^n > budget.
ExactResult brute_force(const Instance& inst, std::uint64_t budget = kDefaultExactBudget);

/// Plain enumeration of all R^n assignments, no pruning. Test oracle.
ExactResult enumerate_all(const Instance& inst, std::uint64_t budget = kDefaultExactBudget);

/// True when R^n <= budget.
bool within_budget(int n, int R, std::uint64_t budget);

}  // namespace max2csp
