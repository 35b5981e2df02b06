#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "max2csp/instance.hpp"

namespace max2csp::testing {

// Arbitrary small instance: random relations (possibly empty), random
// weights, repeated variable pairs and both orientations allowed.
inline Instance random_small_instance(std::mt19937_64& rng, int max_n = 6, int max_R = 4) {
  std::uniform_int_distribution<int> nd(2, max_n), Rd(2, max_R);
  const int n = nd(rng);
  const int R = Rd(rng);
  std::uniform_int_distribution<int> var(0, n - 1), md(1, 8);
  std::uniform_real_distribution<double> w(0.0, 3.0);
  std::bernoulli_distribution keep(0.4);
  std::vector<Constraint> cons;
  const int m = md(rng);
  for (int k = 0; k < m; ++k) {
    Constraint c;
    c.i = var(rng);
    do c.j = var(rng);
    while (c.j == c.i);
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b)
        if (keep(rng)) c.relation.emplace_back(a, b);
    c.weight = k % 3 == 0 ? 1.0 : w(rng);
    cons.push_back(std::move(c));
  }
  return Instance(n, R, std::move(cons));
}

// Calls f(z) for every assignment of n variables over R values.
template <class F>
void for_each_assignment(int n, int R, F&& f) {
  Assignment z(std::vector<int>(n, 0));
  while (true) {
    f(z);
    int k = 0;
    while (k < n && ++z[k] == R) z[k++] = 0;
    if (k == n) return;
  }
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("max2csp-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace max2csp::testing
