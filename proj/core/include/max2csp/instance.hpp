#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace max2csp {

using ValuePair = std::pair<int, int>;

/// A binary constraint on two distinct variables. `relation` holds the
/// satisfying value pairs, kept sorted and free of duplicates.
struct Constraint {
  int i = 0;
  int j = 0;
  std::vector<ValuePair> relation;
  double weight = 1.0;

  bool contains(int a, int b) const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Max 2CSP-R instance: n variables over the domain {0..R-1}.
///
/// Construction validates every invariant and canonicalizes relations
/// (lexicographic order). Duplicate pairs inside one relation, self-loops,
/// out-of-range indices and negative weights throw std::invalid_argument.
class Instance {
 public:
  Instance(int n, int R, std::vector<Constraint> constraints);

  int num_variables() const { return n_; }
  int domain_size() const { return R_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t num_constraints() const { return constraints_.size(); }
  double total_weight() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int n_;
  int R_;
  std::vector<Constraint> constraints_;
};

/// Weighted conjunction (X_i = a) AND (X_j = b).
struct Atom {
  int i = 0;
  int a = 0;
  int j = 0;
  int b = 0;
  double weight = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Normal form with one satisfying pair per constraint.
struct AtomicInstance {
  int n = 0;
  int R = 0;
  std::vector<Atom> atoms;
  double total_weight = 0.0;
};

/// One value per variable, or kUnassigned.
struct Assignment {
  static constexpr int kUnassigned = -1;

  std::vector<int> values;

  Assignment() = default;
  explicit Assignment(std::vector<int> v) : values(std::move(v)) {}
  static Assignment unassigned(int n) { return Assignment(std::vector<int>(n, kUnassigned)); }

  std::size_t size() const { return values.size(); }
  int operator[](std::size_t i) const { return values[i]; }
  int& operator[](std::size_t i) { return values[i]; }
  bool fully_assigned() const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Splits every constraint into one atom per satisfying pair. Atoms on the
/// same (i, a, j, b) are merged by summing weights; empty relations vanish.
/// Atoms are oriented so that i < j and sorted lexicographically.
AtomicInstance normalize(const Instance& inst);

/// Total weight of satisfied constraints. Unassigned endpoints contribute 0.
/// Throws std::invalid_argument on length mismatch or out-of-range values.
double score(const Instance& inst, const Assignment& z);
double score(const AtomicInstance& inst, const Assignment& z);

/// The 3-variable, 5-constraint Max 2CSP-3 instance used as the introductory
/// example. Constraint order: X1 != X3, X1 + X2 = 1, (X2 = 0) or (X1 = 1),
/// X2 = X3, X1 + X3 = 2 (all mod 3), variables renumbered from 0.
///
/// Note: the last three constraints cannot hold together (X2 = X3 forces
/// X1 + X2 to equal both 1 and 2), so the optimum is 4, not 5.
Instance example_instance();

/// Throws std::invalid_argument if z does not fit inst.
void check_assignment(int n, int R, const Assignment& z);

}  // namespace max2csp
