#include "max2csp/instance.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace max2csp {

bool Constraint::contains(int a, int b) const {
  return std::binary_search(relation.begin(), relation.end(), ValuePair{a, b});
}

Instance::Instance(int n, int R, std::vector<Constraint> constraints)
    : n_(n), R_(R), constraints_(std::move(constraints)) {
  if (n < 1) throw std::invalid_argument("instance needs n >= 1");
  if (R < 2) throw std::invalid_argument("instance needs R >= 2");
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    auto& c = constraints_[k];
    const std::string where = "constraint " + std::to_string(k) + ": ";
    if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n)
      throw std::invalid_argument(where + "variable index out of range");
    if (c.i == c.j) throw std::invalid_argument(where + "self-loop constraint");
    if (!(c.weight >= 0.0)) throw std::invalid_argument(where + "negative or NaN weight");
    for (auto [a, b] : c.relation) {
      if (a < 0 || a >= R || b < 0 || b >= R)
        throw std::invalid_argument(where + "value out of range");
    }
    std::sort(c.relation.begin(), c.relation.end());
    if (std::adjacent_find(c.relation.begin(), c.relation.end()) != c.relation.end())
      throw std::invalid_argument(where + "duplicate pair in relation");
  }
}

double Instance::total_weight() const {
  double total = 0.0;
  for (const auto& c : constraints_) total += c.weight;
  return total;
}

bool Assignment::fully_assigned() const {
  return std::none_of(values.begin(), values.end(), [](int v) { return v == kUnassigned; });
}

void check_assignment(int n, int R, const Assignment& z) {
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("assignment length " + std::to_string(z.size()) +
                                " does not match n = " + std::to_string(n));
  for (int v : z.values) {
    if (v != Assignment::kUnassigned && (v < 0 || v >= R))
      throw std::invalid_argument("assignment value out of range: " + std::to_string(v));
  }
}

AtomicInstance normalize(const Instance& inst) {
  std::map<std::tuple<int, int, int, int>, double> merged;
  for (const auto& c : inst.constraints()) {
    if (c.weight == 0.0) continue;
    for (auto [a, b] : c.relation) {
      auto key = c.i < c.j ? std::make_tuple(c.i, a, c.j, b) : std::make_tuple(c.j, b, c.i, a);
      merged[key] += c.weight;
    }
  }
  AtomicInstance out;
  out.n = inst.num_variables();
  out.R = inst.domain_size();
  out.atoms.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    auto [i, a, j, b] = key;
    out.atoms.push_back({i, a, j, b, w});
    out.total_weight += w;
  }
  return out;
}

double score(const Instance& inst, const Assignment& z) {
  check_assignment(inst.num_variables(), inst.domain_size(), z);
  double total = 0.0;
  for (const auto& c : inst.constraints()) {
    const int a = z[c.i];
    const int b = z[c.j];
    if (a == Assignment::kUnassigned || b == Assignment::kUnassigned) continue;
    if (c.contains(a, b)) total += c.weight;
  }
  return total;
}

double score(const AtomicInstance& inst, const Assignment& z) {
  check_assignment(inst.n, inst.R, z);
  double total = 0.0;
  for (const auto& atom : inst.atoms) {
    if (z[atom.i] == atom.a && z[atom.j] == atom.b) total += atom.weight;
  }
  return total;
}

Instance example_instance() {
  constexpr int R = 3;
  auto relation_of = [](auto pred) {
    std::vector<ValuePair> rel;
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b)
        if (pred(a, b)) rel.emplace_back(a, b);
    return rel;
  };
  std::vector<Constraint> cs;
  cs.push_back({0, 2, relation_of([](int a, int b) { return a != b; }), 1.0});
  cs.push_back({0, 1, relation_of([](int a, int b) { return (a + b) % R == 1; }), 1.0});
  cs.push_back({0, 1, relation_of([](int a, int b) { return b == 0 || a == 1; }), 1.0});
  cs.push_back({1, 2, relation_of([](int a, int b) { return a == b; }), 1.0});
  cs.push_back({0, 2, relation_of([](int a, int b) { return (a + b) % R == 2; }), 1.0});
  return Instance(3, R, std::move(cs));
}

}  // namespace max2csp
