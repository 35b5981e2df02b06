#pragma once

#include <string>
#include <string_view>

#include "max2csp/instance.hpp"

namespace max2csp {

// Line-based instance format ('#' lines are comments):
//
//   MAX2CSP 1
//   n <int> R <int> m <int>
//   C <i> <j> <weight> <k> <a1> <b1> ... <ak> <bk>     (m lines)
//
// Indices are 0-based and k is the relation size.

/// Throws ParseError for malformed text and for any instance invariant
/// violation (R < 2, index out of range, duplicate pair, ...).
Instance parse_instance(std::string_view text);

/// Constraints in stored order, pairs in lexicographic order, weights in
/// shortest round-trip decimal form.
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

}  // namespace max2csp
