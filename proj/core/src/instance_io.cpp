#include "max2csp/instance_io.hpp"

#include <stdexcept>

#include "max2csp/text.hpp"

namespace max2csp {

Instance parse_instance(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "empty instance file");

  const auto magic = split_tokens(lines[0].text);
  if (magic.size() != 2 || magic[0] != "MAX2CSP" || magic[1] != "1")
    throw ParseError(lines[0].number, "expected header 'MAX2CSP 1'");

  if (lines.size() < 2) throw ParseError(lines[0].number, "missing size line");
  const auto& size_line = lines[1];
  const auto sz = split_tokens(size_line.text);
  if (sz.size() != 6 || sz[0] != "n" || sz[2] != "R" || sz[4] != "m")
    throw ParseError(size_line.number, "expected 'n <int> R <int> m <int>'");
  const int n = parse_int(sz[1], size_line.number);
  const int R = parse_int(sz[3], size_line.number);
  const int m = parse_int(sz[5], size_line.number);
  if (n < 1) throw ParseError(size_line.number, "n must be >= 1");
  if (R < 2) throw ParseError(size_line.number, "R must be >= 2");
  if (m < 0) throw ParseError(size_line.number, "m must be >= 0");
  if (lines.size() - 2 != static_cast<std::size_t>(m))
    throw ParseError(size_line.number, "declared m = " + std::to_string(m) + " but found " +
                                           std::to_string(lines.size() - 2) + " constraint lines");

  std::vector<Constraint> cs;
  cs.reserve(m);
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const auto& line = lines[k];
    const auto tok = split_tokens(line.text);
    if (tok.size() < 5 || tok[0] != "C")
      throw ParseError(line.number, "expected 'C <i> <j> <weight> <k> pairs...'");
    Constraint c;
    c.i = parse_int(tok[1], line.number);
    c.j = parse_int(tok[2], line.number);
    c.weight = parse_real(tok[3], line.number);
    const int count = parse_int(tok[4], line.number);
    if (count < 0 || tok.size() != 5 + 2 * static_cast<std::size_t>(count))
      throw ParseError(line.number, "relation size does not match the number of values");
    if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n)
      throw ParseError(line.number, "variable index out of range");
    for (int p = 0; p < count; ++p) {
      const int a = parse_int(tok[5 + 2 * p], line.number);
      const int b = parse_int(tok[6 + 2 * p], line.number);
      if (a < 0 || a >= R || b < 0 || b >= R) throw ParseError(line.number, "value out of range");
      c.relation.emplace_back(a, b);
    }
    try {
      // Validates self-loops, weight sign and duplicate pairs for this line.
      Instance probe(n, R, {c});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line.number, e.what());
    }
    cs.push_back(std::move(c));
  }
  return Instance(n, R, std::move(cs));
}

std::string serialize_instance(const Instance& inst) {
  std::string out = "MAX2CSP 1\n";
  out += "n " + std::to_string(inst.num_variables()) + " R " + std::to_string(inst.domain_size()) +
         " m " + std::to_string(inst.num_constraints()) + "\n";
  for (const auto& c : inst.constraints()) {
    out += "C " + std::to_string(c.i) + " " + std::to_string(c.j) + " " + format_real(c.weight) +
           " " + std::to_string(c.relation.size());
    for (auto [a, b] : c.relation) {
      out += " ";
      out += std::to_string(a);
      out += " ";
      out += std::to_string(b);
    }
    out += "\n";
  }
  return out;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void save_instance(const std::string& path, const Instance& inst) {
  write_file_atomic(path, serialize_instance(inst));
}

}  // namespace max2csp
