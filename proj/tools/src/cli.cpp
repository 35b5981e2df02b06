#include "max2csp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

#include "max2csp/exact.hpp"
#include "max2csp/experiment.hpp"
#include "max2csp/gaussian_checks.hpp"
#include "max2csp/generators.hpp"
#include "max2csp/instance_io.hpp"
#include "max2csp/rounding.hpp"
#include "max2csp/sdp.hpp"
#include "max2csp/text.hpp"

namespace max2csp {

namespace {

// Bad input that is the caller's fault; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string assignment_line(const Assignment& z) {
  std::string s = "ASSIGNMENT";
  for (int v : z.values) s += " " + std::to_string(v);
  return s;
}

// Writes to `path`, or to `out` when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file_atomic(path, text);
}

struct GenArgs {
  std::string family = "2lin";
  int n = 10;
  int R = 4;
  int m = 30;
  double density = 0.5;
  bool planted = false;
  std::uint64_t seed = 1;
  std::string out;
  std::string planted_out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Instance inst = example_instance();
  std::optional<Assignment> planted;
  if (a.family == "2lin") {
    inst = gen_2lin(a.n, a.R, a.m, a.seed);
  } else if (a.family == "ug") {
    auto g = gen_unique_game(a.n, a.R, a.m, a.seed, a.planted);
    inst = std::move(g.instance);
    planted = std::move(g.planted);
  } else if (a.family == "random") {
    inst = gen_random_2csp(a.n, a.R, a.m, a.density, a.seed);
  }
  if (!a.planted_out.empty()) {
    if (!planted) throw UsageError("--planted-out needs --family ug --planted");
    write_file_atomic(a.planted_out, assignment_line(*planted) + "\n");
  }
  emit(a.out, serialize_instance(inst), out);
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string out;
  std::uint64_t seed = 1;
  int dim = 0;
  std::string scope = "atoms";
  int max_outer = SolverConfig{}.max_outer;
  int max_inner = SolverConfig{}.max_inner;
  int candidates = SolverConfig{}.candidate_trials;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  SolverConfig cfg;
  cfg.seed = a.seed;
  cfg.dim = a.dim;
  cfg.scope = parse_scope(a.scope);
  cfg.max_outer = a.max_outer;
  cfg.max_inner = a.max_inner;
  cfg.candidate_trials = a.candidates;
  const AtomicInstance atomic = normalize(inst);
  const SolveResult r = solve(atomic, cfg);
  if (!a.out.empty()) save_solution(a.out, r.solution);
  out << "objective " << format_real(r.report.objective) << "\n"
      << "converged " << r.converged << "\n"
      << "outer_rounds " << r.outer_rounds << "\n"
      << "inner_steps " << r.inner_steps << "\n"
      << "best_integral " << format_real(r.best_integral) << "\n"
      << "integral_fallback " << r.integral_fallback << "\n"
      << "max_norm_violation " << format_real(r.report.max_norm_violation) << "\n"
      << "max_ortho_violation " << format_real(r.report.max_ortho_violation) << "\n"
      << "min_pair_inner " << format_real(r.report.min_constraint_pair_inner) << "\n";
  return kExitOk;
}

struct RoundArgs {
  std::string instance;
  std::string solution;
  std::string method = "shortlist";
  std::string empty = "uniform";
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string dump_state;
};

int cmd_round(const RoundArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const VectorSolution sol = load_solution(a.solution);
  if (sol.num_variables() != inst.num_variables() || sol.domain_size() != inst.domain_size())
    throw UsageError("solution shape does not match the instance");
  const AtomicInstance atomic = normalize(inst);
  Assignment best;
  RoundingStats st;
  if (a.method == "shortlist") {
    std::tie(best, st) = best_of(sol, atomic, a.trials, a.seed, parse_empty_policy(a.empty));
    if (!a.dump_state.empty()) {
      // The state of the first trial, reproduced from its stream.
      ShortlistRounder rounder(sol, parse_empty_policy(a.empty));
      Rng rng = make_rng(a.seed, stream::kRoundingTrial, 0);
      RoundingState state;
      rounder.round(rng, &state);
      write_file_atomic(a.dump_state, dump_state(state));
    }
  } else {
    if (!a.dump_state.empty()) throw UsageError("--dump-state needs --method shortlist");
    st = naive_stats(sol, atomic, a.trials, a.seed);
    double top = -1.0;
    for (std::size_t k = 0; k < a.trials; ++k) {
      Rng rng = make_rng(a.seed, stream::kNaiveTrial, k);
      Assignment z = naive_round(sol, rng);
      const double s = score(atomic, z);
      if (s > top) {
        top = s;
        best = std::move(z);
      }
    }
  }
  if (!a.out.empty()) write_file_atomic(a.out, assignment_line(best) + "\n");
  out << "SCORE " << format_real(score(inst, best)) << "\n"
      << "MEAN " << format_real(st.mean) << "\n"
      << "STDDEV " << format_real(st.stddev) << "\n"
      << "TRIALS " << st.trials << "\n"
      << assignment_line(best) << "\n";
  return kExitOk;
}

struct ExactArgs {
  std::string instance;
  std::uint64_t budget = kDefaultExactBudget;
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  ExactResult r;
  try {
    r = brute_force(inst, a.budget);
  } catch (const BudgetExceeded& e) {
    throw UsageError(e.what());
  }
  out << "OPT " << format_real(r.value) << "\n" << assignment_line(r.witness) << "\n";
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<int> threads;
  std::optional<std::uint64_t> budget;
  std::string out;
  bool timing = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (a.threads) cfg.threads = *a.threads;
  if (a.budget) cfg.budget = *a.budget;
  if (!a.out.empty()) cfg.out = a.out;
  cfg.timing = a.timing;
  cfg.validate();
  const auto records = run_experiment(cfg);
  emit(cfg.out, to_csv(records), out);
  return kExitOk;
}

struct VerifyArgs {
  std::uint64_t seed = 1;
  std::size_t samples = gaussian::VerifyOptions{}.wedge_samples;
  std::size_t pairs = gaussian::VerifyOptions{}.wedge_pairs;
  std::size_t profiles = gaussian::VerifyOptions{}.profiles_per_r;
  std::string out;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  gaussian::VerifyOptions opt;
  opt.seed = a.seed;
  opt.wedge_samples = a.samples;
  opt.wedge_pairs = a.pairs;
  opt.profiles_per_r = a.profiles;
  std::string text;
  bool ok = true;
  for (const auto& r : gaussian::verify_all(opt)) {
    text += gaussian::format_report(r) + "\n";
    ok = ok && r.pass;
  }
  emit(a.out, text, out);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Max 2CSP shortlist rounding toolkit", "max2csp"};
  app.require_subcommand(1);
  std::function<int()> action;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a generated instance");
  g->add_option("--family", gen.family, "example | 2lin | ug | random")
      ->check(CLI::IsMember({"example", "2lin", "ug", "random"}));
  g->add_option("--n", gen.n, "variables");
  g->add_option("--R", gen.R, "domain size");
  g->add_option("--m", gen.m, "constraints");
  g->add_option("--density", gen.density, "pair density (random)");
  g->add_flag("--planted", gen.planted, "plant a satisfying assignment (ug)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "instance file (default stdout)");
  g->add_option("--planted-out", gen.planted_out, "write the planted assignment here");
  g->callback([&] { action = [&] { return cmd_gen(gen, out); }; });

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "Solve the vector relaxation and report feasibility");
  s->add_option("instance", sv.instance)->required();
  s->add_option("--out", sv.out, "solution file");
  s->add_option("--seed", sv.seed);
  s->add_option("--dim", sv.dim, "vector dimension, 0 = automatic");
  s->add_option("--scope", sv.scope, "nonnegativity scope")->check(CLI::IsMember({"atoms", "edges", "all"}));
  s->add_option("--max-outer", sv.max_outer);
  s->add_option("--max-inner", sv.max_inner);
  s->add_option("--candidates", sv.candidates, "hill-climbed integral starts");
  s->callback([&] { action = [&] { return cmd_solve(sv, out); }; });

  RoundArgs rd;
  auto* r = app.add_subcommand("round", "Round a solution file to an assignment");
  r->add_option("instance", rd.instance)->required();
  r->add_option("solution", rd.solution)->required();
  r->add_option("--method", rd.method)->check(CLI::IsMember({"shortlist", "naive"}));
  r->add_option("--empty", rd.empty, "empty-shortlist policy")->check(CLI::IsMember({"uniform", "none"}));
  r->add_option("--trials", rd.trials, "best of this many trials")->check(CLI::PositiveNumber);
  r->add_option("--seed", rd.seed);
  r->add_option("--out", rd.out, "assignment file");
  r->add_option("--dump-state", rd.dump_state, "write the first trial's rounding state");
  r->callback([&] { action = [&] { return cmd_round(rd, out); }; });

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Exact optimum by branch and bound");
  e->add_option("instance", ex.instance)->required();
  e->add_option("--budget", ex.budget, "refuse when R^n exceeds this");
  e->callback([&] { action = [&] { return cmd_exact(ex, out); }; });

  ExperimentArgs xp;
  auto* x = app.add_subcommand("experiment", "Run an experiment config and write CSV");
  x->add_option("config", xp.config)->required();
  x->add_option("--seed", xp.seed);
  x->add_option("--trials", xp.trials)->check(CLI::PositiveNumber);
  x->add_option("--threads", xp.threads)->check(CLI::PositiveNumber);
  x->add_option("--budget", xp.budget);
  x->add_option("--out", xp.out, "CSV file (default: config 'out', else stdout)");
  x->add_flag("--timing", xp.timing, "fill the wall_ms column");
  x->callback([&] { action = [&] { return cmd_experiment(xp, out); }; });

  VerifyArgs vf;
  auto* v = app.add_subcommand("verify-gaussian", "Check the Gaussian-tail inequalities");
  v->add_option("--seed", vf.seed);
  v->add_option("--trials", vf.samples, "Monte-Carlo samples per vector pair")->check(CLI::PositiveNumber);
  v->add_option("--pairs", vf.pairs)->check(CLI::PositiveNumber);
  v->add_option("--profiles", vf.profiles, "threshold profiles per R")->check(CLI::PositiveNumber);
  v->add_option("--out", vf.out, "report file (default stdout)");
  v->callback([&] { action = [&] { return cmd_verify(vf, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action();
  } catch (const std::exception& ex_) {
    err << "error: " << ex_.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace max2csp
