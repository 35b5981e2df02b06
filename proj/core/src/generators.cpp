#include "max2csp/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "max2csp/random.hpp"

namespace max2csp {
namespace {

void check_sizes(int n, int R, int m) {
  if (n < 2) throw std::invalid_argument("generator needs n >= 2");
  if (R < 2) throw std::invalid_argument("generator needs R >= 2");
  if (m < 1) throw std::invalid_argument("generator needs m >= 1");
}

std::pair<int, int> random_pair(int n, Rng& rng) {
  std::uniform_int_distribution<int> first(0, n - 1);
  std::uniform_int_distribution<int> second(0, n - 2);
  const int i = first(rng);
  int j = second(rng);
  if (j >= i) ++j;
  return {i, j};
}

}  // namespace

Instance gen_2lin(int n, int R, int m, std::uint64_t seed) {
  check_sizes(n, R, m);
  Rng rng(derive_seed(seed, stream::kGenerator, 1));
  std::uniform_int_distribution<int> shift_dist(0, R - 1);
  std::vector<Constraint> cs;
  cs.reserve(m);
  for (int k = 0; k < m; ++k) {
    auto [i, j] = random_pair(n, rng);
    const int shift = shift_dist(rng);
    Constraint c{i, j, {}, 1.0};
    for (int b = 0; b < R; ++b) c.relation.emplace_back((b + shift) % R, b);
    cs.push_back(std::move(c));
  }
  return Instance(n, R, std::move(cs));
}

GeneratedInstance gen_unique_game(int n, int R, int m, std::uint64_t seed, bool planted) {
  check_sizes(n, R, m);
  Rng rng(derive_seed(seed, stream::kGenerator, 2));
  std::optional<Assignment> hidden;
  if (planted) {
    std::uniform_int_distribution<int> value(0, R - 1);
    Assignment h = Assignment::unassigned(n);
    for (int i = 0; i < n; ++i) h[i] = value(rng);
    hidden = std::move(h);
  }
  std::vector<int> perm(R);
  std::vector<Constraint> cs;
  cs.reserve(m);
  for (int k = 0; k < m; ++k) {
    auto [i, j] = random_pair(n, rng);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    if (hidden) {
      // Swap images so that perm[h_i] == h_j; still a bijection.
      const int hi = (*hidden)[i];
      const int hj = (*hidden)[j];
      auto it = std::find(perm.begin(), perm.end(), hj);
      std::iter_swap(it, perm.begin() + hi);
    }
    Constraint c{i, j, {}, 1.0};
    for (int a = 0; a < R; ++a) c.relation.emplace_back(a, perm[a]);
    cs.push_back(std::move(c));
  }
  return {Instance(n, R, std::move(cs)), std::move(hidden)};
}

Instance gen_random_2csp(int n, int R, int m, double density, std::uint64_t seed) {
  check_sizes(n, R, m);
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  Rng rng(derive_seed(seed, stream::kGenerator, 3));
  std::bernoulli_distribution keep(density);
  std::vector<Constraint> cs;
  cs.reserve(m);
  for (int k = 0; k < m; ++k) {
    auto [i, j] = random_pair(n, rng);
    Constraint c{i, j, {}, 1.0};
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b)
        if (keep(rng)) c.relation.emplace_back(a, b);
    cs.push_back(std::move(c));
  }
  return Instance(n, R, std::move(cs));
}

}  // namespace max2csp
