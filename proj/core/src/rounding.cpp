#include "max2csp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "max2csp/gaussian.hpp"
#include "max2csp/text.hpp"

namespace max2csp {

std::string to_string(EmptyPolicy policy) {
  return policy == EmptyPolicy::kNone ? "none" : "uniform";
}

EmptyPolicy parse_empty_policy(const std::string& s) {
  if (s == "uniform") return EmptyPolicy::kUniform;
  if (s == "none") return EmptyPolicy::kNone;
  throw std::invalid_argument("unknown empty-shortlist policy '" + s + "'");
}

PairGeometry pair_geometry(const VectorSolution& sol, int i, int a, int j, int b) {
  PairGeometry g;
  g.inner = sol.inner(i, a, j, b);
  g.norm_first = sol.norm(i, a);
  g.norm_second = sol.norm(j, b);
  if (g.norm_first >= kZeroNorm && g.norm_second >= kZeroNorm)
    g.cos_theta = std::clamp(g.inner / (g.norm_first * g.norm_second), 0.0, 1.0);
  return g;
}

LabelTable target_probs(const VectorSolution& sol) {
  const int n = sol.num_variables();
  const int R = sol.domain_size();
  const double sqrtR = std::sqrt(static_cast<double>(R));
  LabelTable p(n, R);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < R; ++a) p(i, a) = 0.5 * (sol.norm(i, a) / sqrtR + 1.0 / R);
  return p;
}

LabelTable thresholds(const LabelTable& p) {
  LabelTable t(p.n, p.R);
  for (std::size_t k = 0; k < p.values.size(); ++k) t.values[k] = gaussian::inv_tail(p.values[k]);
  return t;
}

namespace {

bool member(const VectorSolution& sol, int i, int a, double nrm, double p, double t,
            std::span<const double> g, Rng& coins) {
  if (nrm < kZeroNorm) return std::bernoulli_distribution(p)(coins);
  return gaussian::dot(sol.vec(i, a), g) >= nrm * t;
}

}  // namespace

Shortlists shortlists(const VectorSolution& sol, const LabelTable& p, const LabelTable& t,
                      std::span<const double> g, Rng& coins) {
  if (g.size() != static_cast<std::size_t>(sol.dim()))
    throw std::invalid_argument("shortlists: g has the wrong dimension");
  Shortlists lists(sol.num_variables());
  for (int i = 0; i < sol.num_variables(); ++i)
    for (int a = 0; a < sol.domain_size(); ++a)
      if (member(sol, i, a, sol.norm(i, a), p(i, a), t(i, a), g, coins)) lists[i].push_back(a);
  return lists;
}

Assignment select(const Shortlists& lists, int R, Rng& rng, EmptyPolicy policy) {
  Assignment z = Assignment::unassigned(static_cast<int>(lists.size()));
  for (std::size_t i = 0; i < lists.size(); ++i) {
    const auto& L = lists[i];
    if (!L.empty()) {
      z[i] = L[std::uniform_int_distribution<std::size_t>(0, L.size() - 1)(rng)];
    } else if (policy == EmptyPolicy::kUniform) {
      z[i] = std::uniform_int_distribution<int>(0, R - 1)(rng);
    }
  }
  return z;
}

ShortlistRounder::ShortlistRounder(const VectorSolution& sol, EmptyPolicy policy)
    : sol_(&sol), policy_(policy), p_(target_probs(sol)), t_(max2csp::thresholds(p_)) {}

Shortlists ShortlistRounder::lists_for(std::span<const double> g, Rng& coins) const {
  return shortlists(*sol_, p_, t_, g, coins);
}

Assignment ShortlistRounder::round(Rng& rng, RoundingState* state) const {
  Rng g_stream(rng());
  Rng coins(rng());
  Rng picks(rng());
  auto g = gaussian::sample_gaussian_vector(static_cast<std::size_t>(sol_->dim()), g_stream);
  auto lists = lists_for(g, coins);
  Assignment z = select(lists, sol_->domain_size(), picks, policy_);
  if (state) {
    state->p = p_;
    state->t = t_;
    state->g = std::move(g);
    state->lists = std::move(lists);
  }
  return z;
}

std::pair<Assignment, RoundingState> round_once(const VectorSolution& sol, Rng& rng,
                                                EmptyPolicy policy) {
  ShortlistRounder rounder(sol, policy);
  RoundingState state;
  Assignment z = rounder.round(rng, &state);
  return {std::move(z), std::move(state)};
}

namespace {

// Welford accumulator.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double stddev() const { return count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0; }
};

}  // namespace

std::pair<Assignment, RoundingStats> best_of(const VectorSolution& sol, const AtomicInstance& atomic,
                                             std::size_t trials, std::uint64_t seed,
                                             EmptyPolicy policy) {
  if (trials < 1) throw std::invalid_argument("best_of: trials must be >= 1");
  ShortlistRounder rounder(sol, policy);
  const int R = sol.domain_size();
  RoundingStats st;
  st.trials = trials;
  st.shortlist_histogram.assign(static_cast<std::size_t>(R) + 1, 0);
  Moments mom;
  Assignment best;
  double best_score = -1.0;
  std::uint64_t empty = 0;
  std::uint64_t total_size = 0;
  RoundingState state;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, stream::kRoundingTrial, k);
    Assignment z = rounder.round(rng, &state);
    for (const auto& L : state.lists) {
      ++st.shortlist_histogram[L.size()];
      total_size += L.size();
      if (L.empty()) ++empty;
    }
    const double s = score(atomic, z);
    mom.add(s);
    if (s > best_score) {
      best_score = s;
      best = std::move(z);
    }
  }
  const double cells = static_cast<double>(trials) * sol.num_variables();
  st.mean = mom.mean;
  st.stddev = mom.stddev();
  st.max = best_score;
  st.mean_shortlist_size = static_cast<double>(total_size) / cells;
  st.empty_rate = static_cast<double>(empty) / cells;
  return {std::move(best), std::move(st)};
}

Assignment naive_round(const VectorSolution& sol, Rng& rng) {
  const int n = sol.num_variables();
  const int R = sol.domain_size();
  Assignment z = Assignment::unassigned(n);
  std::vector<double> w(R);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int a = 0; a < R; ++a) total += (w[a] = sol.norm(i, a));
    if (total <= 0.0) {
      z[i] = std::uniform_int_distribution<int>(0, R - 1)(rng);
      continue;
    }
    double u = unit(rng) * total;
    int a = 0;
    // Skip zero-weight values so u == 0 never lands on them.
    while (a < R - 1 && (u >= w[a] || w[a] == 0.0)) u -= w[a++];
    while (w[a] == 0.0) --a;
    z[i] = a;
  }
  return z;
}

RoundingStats naive_stats(const VectorSolution& sol, const AtomicInstance& atomic,
                          std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("naive_stats: trials must be >= 1");
  RoundingStats st;
  st.trials = trials;
  Moments mom;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, stream::kNaiveTrial, k);
    const double s = score(atomic, naive_round(sol, rng));
    mom.add(s);
    st.max = std::max(st.max, s);
  }
  st.mean = mom.mean;
  st.stddev = mom.stddev();
  st.mean_shortlist_size = 1.0;
  return st;
}

double naive_expected_score(const VectorSolution& sol, const AtomicInstance& atomic) {
  const int n = sol.num_variables();
  const int R = sol.domain_size();
  LabelTable prob(n, R);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int a = 0; a < R; ++a) total += sol.norm(i, a);
    for (int a = 0; a < R; ++a) prob(i, a) = total > 0.0 ? sol.norm(i, a) / total : 1.0 / R;
  }
  double e = 0.0;
  for (const auto& at : atomic.atoms) e += at.weight * prob(at.i, at.a) * prob(at.j, at.b);
  return e;
}

PairEstimate pair_prob_estimate(const VectorSolution& sol, int i, int a, int j, int b,
                                std::size_t samples, std::uint64_t seed) {
  if (i == j) throw std::invalid_argument("pair_prob_estimate: needs i != j");
  if (samples < 1000) throw std::invalid_argument("pair_prob_estimate: needs >= 1000 samples");
  const LabelTable p = target_probs(sol);
  const double pa = p(i, a);
  const double pb = p(j, b);
  const double ta = gaussian::inv_tail(pa);
  const double tb = gaussian::inv_tail(pb);
  const double na = sol.norm(i, a);
  const double nb = sol.norm(j, b);
  Rng rng = make_rng(seed, stream::kRoundingTrial, 0);
  Rng coins = make_rng(seed, stream::kRoundingTrial, 1);
  std::vector<double> g(static_cast<std::size_t>(sol.dim()));
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    gaussian::fill_gaussian(g, rng);
    if (member(sol, i, a, na, pa, ta, g, coins) && member(sol, j, b, nb, pb, tb, g, coins)) ++hits;
  }
  PairEstimate out;
  out.samples = samples;
  out.p_first = pa;
  out.p_second = pb;
  const double N = static_cast<double>(samples);
  out.estimate = static_cast<double>(hits) / N;
  const double q = std::max(out.estimate, 1.0 / N);
  out.sigma = std::sqrt(q * (1.0 - q) / N);
  return out;
}

LabelTable membership_frequencies(const VectorSolution& sol, std::size_t trials,
                                  std::uint64_t seed) {
  ShortlistRounder rounder(sol);
  LabelTable freq(sol.num_variables(), sol.domain_size());
  RoundingState state;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, stream::kRoundingTrial, k);
    rounder.round(rng, &state);
    for (int i = 0; i < sol.num_variables(); ++i)
      for (int a : state.lists[i]) freq(i, a) += 1.0;
  }
  for (double& f : freq.values) f /= static_cast<double>(trials);
  return freq;
}

AtomProbeReport probe_atoms(const VectorSolution& sol, const AtomicInstance& atomic,
                            std::size_t trials, int U, double min_inner, std::uint64_t seed) {
  AtomProbeReport rep;
  rep.trials = trials;
  rep.U = U;
  for (std::size_t k = 0; k < atomic.atoms.size(); ++k) {
    const Atom& at = atomic.atoms[k];
    const double ip = sol.inner(at.i, at.a, at.j, at.b);
    if (ip >= min_inner) rep.atoms.push_back({k, ip, 0, 0, 0.0, 0.0, -1.0});
  }
  if (rep.atoms.empty() || trials == 0) return rep;

  ShortlistRounder rounder(sol);
  const int n = sol.num_variables();
  const int R = sol.domain_size();
  std::vector<char> in(static_cast<std::size_t>(n) * R);
  RoundingState state;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, stream::kRoundingTrial, k);
    rounder.round(rng, &state);
    std::fill(in.begin(), in.end(), 0);
    for (int i = 0; i < n; ++i)
      for (int a : state.lists[i]) in[static_cast<std::size_t>(i) * R + a] = 1;
    for (auto& pr : rep.atoms) {
      const Atom& at = atomic.atoms[pr.atom];
      if (in[static_cast<std::size_t>(at.i) * R + at.a] && in[static_cast<std::size_t>(at.j) * R + at.b]) {
        ++pr.joint;
        if (static_cast<int>(state.lists[at.i].size()) <= U &&
            static_cast<int>(state.lists[at.j].size()) <= U)
          ++pr.joint_small;
      }
    }
  }
  const double logR = std::log(static_cast<double>(R));
  for (auto& pr : rep.atoms) {
    pr.joint_prob = static_cast<double>(pr.joint) / static_cast<double>(trials);
    pr.lower_bound_constant = pr.inner > 0.0 ? pr.joint_prob * R / (logR * pr.inner) : 0.0;
    if (pr.joint > 0)
      pr.small_given_joint = static_cast<double>(pr.joint_small) / static_cast<double>(pr.joint);
  }
  return rep;
}

std::string dump_state(const RoundingState& state) {
  std::string out = "ROUND 1 " + std::to_string(state.p.n) + " " + std::to_string(state.p.R) + " " +
                    std::to_string(state.g.size()) + "\n";
  out += "G";
  for (double x : state.g) out += " " + format_real(x);
  out += "\n";
  for (int i = 0; i < state.p.n; ++i) {
    out += "P " + std::to_string(i);
    for (int a = 0; a < state.p.R; ++a) out += " " + format_real(state.p(i, a));
    out += "\nT " + std::to_string(i);
    for (int a = 0; a < state.t.R; ++a) out += " " + format_real(state.t(i, a));
    out += "\nL " + std::to_string(i) + " " + std::to_string(state.lists[i].size());
    for (int a : state.lists[i]) out += " " + std::to_string(a);
    out += "\n";
  }
  return out;
}

}  // namespace max2csp
