#pragma once

#include <cstdint>
#include <optional>

#include "max2csp/instance.hpp"

namespace max2csp {

/// Generated instance plus the hidden assignment when one was planted.
struct GeneratedInstance {
  Instance instance;
  std::optional<Assignment> planted;
};

/// Random Max 2LIN-R: m constraints X_i - X_j = b (mod R) on uniformly random
/// ordered pairs i != j with uniform shifts b.
Instance gen_2lin(int n, int R, int m, std::uint64_t seed);

/// Random unique game: every relation is the graph of a uniform random
/// permutation. With `planted`, each permutation is patched to agree with a
/// hidden uniform assignment, which is returned alongside.
GeneratedInstance gen_unique_game(int n, int R, int m, std::uint64_t seed, bool planted);

/// Random 2CSP: each of the R^2 pairs enters each relation independently
/// with probability `density` in (0, 1].
Instance gen_random_2csp(int n, int R, int m, double density, std::uint64_t seed);

}  // namespace max2csp
