#include <vector>

#include "max2csp/sdp.hpp"
#include "max2csp/text.hpp"

namespace max2csp {

std::string serialize_solution(const VectorSolution& sol) {
  std::string out = "SDPSOL 1 " + std::to_string(sol.num_variables()) + " " +
                    std::to_string(sol.domain_size()) + " " + std::to_string(sol.dim()) + "\n";
  for (int i = 0; i < sol.num_variables(); ++i) {
    for (int a = 0; a < sol.domain_size(); ++a) {
      out += "V " + std::to_string(i) + " " + std::to_string(a);
      for (double x : sol.vec(i, a)) {
        out += ' ';
        out += format_real(x);
      }
      out += '\n';
    }
  }
  return out;
}

VectorSolution parse_solution(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "empty solution file");
  const auto head = split_tokens(lines[0].text);
  if (head.size() != 5 || head[0] != "SDPSOL" || head[1] != "1")
    throw ParseError(lines[0].number, "expected 'SDPSOL 1 <n> <R> <dim>'");
  const int n = parse_int(head[2], lines[0].number);
  const int R = parse_int(head[3], lines[0].number);
  const int dim = parse_int(head[4], lines[0].number);
  if (n < 1 || R < 2 || dim < 1) throw ParseError(lines[0].number, "invalid solution shape");

  VectorSolution sol(n, R, dim);
  std::vector<char> seen(static_cast<std::size_t>(n) * R, 0);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    const auto tok = split_tokens(line.text);
    if (tok.size() != 3 + static_cast<std::size_t>(dim) || tok[0] != "V")
      throw ParseError(line.number, "expected 'V <i> <a>' followed by " + std::to_string(dim) + " reals");
    const int i = parse_int(tok[1], line.number);
    const int a = parse_int(tok[2], line.number);
    if (i < 0 || i >= n || a < 0 || a >= R) throw ParseError(line.number, "index out of range");
    auto& flag = seen[static_cast<std::size_t>(i) * R + a];
    if (flag) throw ParseError(line.number, "duplicate vector line");
    flag = 1;
    auto v = sol.vec(i, a);
    for (int d = 0; d < dim; ++d) v[d] = parse_real(tok[3 + d], line.number);
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k])
      throw ParseError(lines.back().number, "missing vector for i=" + std::to_string(k / R) +
                                                " a=" + std::to_string(k % R));
  }
  return sol;
}

void save_solution(const std::string& path, const VectorSolution& sol) {
  write_file_atomic(path, serialize_solution(sol));
}

VectorSolution load_solution(const std::string& path) { return parse_solution(read_file(path)); }

}  // namespace max2csp
