#include "max2csp/exact.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace max2csp {

bool within_budget(int n, int R, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (total > budget / static_cast<std::uint64_t>(R)) return false;
    total *= static_cast<std::uint64_t>(R);
  }
  return total <= budget;
}

namespace {

void require_budget(const Instance& inst, std::uint64_t budget) {
  if (!within_budget(inst.num_variables(), inst.domain_size(), budget))
    throw BudgetExceeded("R^n = " + std::to_string(inst.domain_size()) + "^" +
                         std::to_string(inst.num_variables()) + " exceeds budget " +
                         std::to_string(budget));
}

struct Search {
  int n = 0;
  int R = 0;
  std::vector<int> order;  // depth -> variable
  // Constraints decided at each depth: the later endpoint sits at that depth.
  struct Local {
    int other;  // earlier variable
    bool other_is_first;  // relation indexed as (other value, this value)
    double weight;
    const std::vector<char>* table;
  };
  std::vector<std::vector<Local>> decided_at;
  std::vector<double> suffix;  // weight decided at depth >= d
  std::vector<std::vector<char>> tables;

  Assignment z;
  Assignment best_z;
  double best = -1.0;
  std::uint64_t explored = 0;

  void dfs(int depth, double fixed) {
    ++explored;
    if (depth == n) {
      if (fixed > best) {
        best = fixed;
        best_z = z;
      }
      return;
    }
    const int v = order[depth];
    std::vector<std::pair<double, int>> gains(R);
    for (int a = 0; a < R; ++a) gains[a] = {0.0, a};
    for (const auto& c : decided_at[depth]) {
      const int ov = z[c.other];
      for (int a = 0; a < R; ++a) {
        const std::size_t idx = c.other_is_first ? static_cast<std::size_t>(ov) * R + a
                                                 : static_cast<std::size_t>(a) * R + ov;
        if ((*c.table)[idx]) gains[a].first += c.weight;
      }
    }
    std::stable_sort(gains.begin(), gains.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (const auto& [g, a] : gains) {
      if (fixed + g + suffix[depth + 1] <= best) break;  // sorted: later values are no better
      z[v] = a;
      dfs(depth + 1, fixed + g);
    }
    z[v] = Assignment::kUnassigned;
  }
};

}  // namespace

ExactResult brute_force(const Instance& inst, std::uint64_t budget) {
  require_budget(inst, budget);
  Search s;
  s.n = inst.num_variables();
  s.R = inst.domain_size();

  std::vector<double> incident(s.n, 0.0);
  for (const auto& c : inst.constraints()) {
    incident[c.i] += c.weight;
    incident[c.j] += c.weight;
  }
  s.order.resize(s.n);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int x, int y) { return incident[x] > incident[y]; });
  std::vector<int> pos(s.n);
  for (int d = 0; d < s.n; ++d) pos[s.order[d]] = d;

  s.tables.reserve(inst.num_constraints());
  s.decided_at.assign(s.n, {});
  std::vector<double> at_depth(s.n + 1, 0.0);
  for (const auto& c : inst.constraints()) {
    if (c.relation.empty() || c.weight == 0.0) continue;
    std::vector<char> table(static_cast<std::size_t>(s.R) * s.R, 0);
    for (auto [a, b] : c.relation) table[static_cast<std::size_t>(a) * s.R + b] = 1;
    s.tables.push_back(std::move(table));
    const bool i_later = pos[c.i] > pos[c.j];
    const int depth = std::max(pos[c.i], pos[c.j]);
    // Table is indexed (value of c.i, value of c.j).
    s.decided_at[depth].push_back({i_later ? c.j : c.i, !i_later, c.weight, &s.tables.back()});
    at_depth[depth] += c.weight;
  }
  s.suffix.assign(s.n + 1, 0.0);
  for (int d = s.n - 1; d >= 0; --d) s.suffix[d] = s.suffix[d + 1] + at_depth[d];

  s.z = Assignment::unassigned(s.n);
  s.dfs(0, 0.0);
  return {s.best, s.best_z, s.explored};
}

ExactResult enumerate_all(const Instance& inst, std::uint64_t budget) {
  require_budget(inst, budget);
  const int n = inst.num_variables();
  const int R = inst.domain_size();
  Assignment z(std::vector<int>(n, 0));
  ExactResult out{-1.0, z, 0};
  while (true) {
    ++out.explored;
    const double s = score(inst, z);
    if (s > out.value) {
      out.value = s;
      out.witness = z;
    }
    int k = 0;
    while (k < n && ++z[k] == R) z[k++] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace max2csp
