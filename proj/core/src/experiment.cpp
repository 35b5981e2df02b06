#include "max2csp/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "max2csp/generators.hpp"
#include "max2csp/random.hpp"
#include "max2csp/rounding.hpp"
#include "max2csp/text.hpp"

namespace max2csp {

std::string to_string(Family f) {
  switch (f) {
    case Family::kExample: return "example";
    case Family::k2Lin: return "2lin";
    case Family::kUniqueGame: return "ug";
    case Family::kRandom: return "random";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (instances.empty()) throw std::invalid_argument("no instance directive");
  solver.validate();
  for (const auto& s : instances) {
    if (s.count < 1) throw std::invalid_argument("instance count must be >= 1");
    if (s.family == Family::kExample) continue;
    if (s.n < 2 || s.R < 2 || s.m < 1) throw std::invalid_argument("instance needs n >= 2, R >= 2, m >= 1");
    if (s.family == Family::kRandom && !(s.density > 0.0 && s.density <= 1.0))
      throw std::invalid_argument("density must be in (0, 1]");
  }
}

namespace {

void set_solver_key(SolverConfig& sc, std::string_view key, std::string_view val, std::size_t line) {
  if (key == "dim") sc.dim = parse_int(val, line);
  else if (key == "max_outer") sc.max_outer = parse_int(val, line);
  else if (key == "max_inner") sc.max_inner = parse_int(val, line);
  else if (key == "penalty_init") sc.penalty_init = parse_real(val, line);
  else if (key == "penalty_growth") sc.penalty_growth = parse_real(val, line);
  else if (key == "tol_feas") sc.tol_feas = parse_real(val, line);
  else if (key == "tol_obj") sc.tol_obj = parse_real(val, line);
  else if (key == "candidate_trials") sc.candidate_trials = parse_int(val, line);
  else if (key == "scope") {
    try {
      sc.scope = parse_scope(std::string(val));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  } else {
    throw ParseError(line, "unknown solver key '" + std::string(key) + "'");
  }
}

InstanceSpec parse_instance_spec(const std::vector<std::string_view>& tok, std::size_t line) {
  if (tok.size() < 2) throw ParseError(line, "instance needs a family");
  InstanceSpec s;
  const auto fam = tok[1];
  std::size_t fixed = 0;  // positional arguments after the family
  if (fam == "example") {
    s.family = Family::kExample;
  } else if (fam == "2lin") {
    s.family = Family::k2Lin;
    fixed = 3;
  } else if (fam == "ug") {
    s.family = Family::kUniqueGame;
    fixed = 4;
  } else if (fam == "random") {
    s.family = Family::kRandom;
    fixed = 4;
  } else {
    throw ParseError(line, "unknown family '" + std::string(fam) + "'");
  }
  if (tok.size() != 2 + fixed && tok.size() != 3 + fixed)
    throw ParseError(line, "wrong number of arguments for family " + std::string(fam));
  if (fixed > 0) {
    s.n = parse_int(tok[2], line);
    s.R = parse_int(tok[3], line);
    s.m = parse_int(tok[4], line);
  }
  if (s.family == Family::kUniqueGame) {
    if (tok[5] == "planted") s.planted = true;
    else if (tok[5] != "free") throw ParseError(line, "expected 'planted' or 'free'");
  }
  if (s.family == Family::kRandom) s.density = parse_real(tok[5], line);
  if (tok.size() == 3 + fixed) s.count = parse_int(tok[2 + fixed], line);
  return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "empty experiment config");
  const auto head = split_tokens(lines[0].text);
  if (head.size() != 2 || head[0] != "EXP" || head[1] != "1")
    throw ParseError(lines[0].number, "expected 'EXP 1'");
  ExperimentConfig cfg;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto ln = lines[k].number;
    const auto tok = split_tokens(lines[k].text);
    const auto d = tok[0];
    auto need = [&](std::size_t count) {
      if (tok.size() != count) throw ParseError(ln, "wrong number of arguments for '" + std::string(d) + "'");
    };
    if (d == "suite") {
      need(2);
      cfg.suite = std::string(tok[1]);
    } else if (d == "seed") {
      need(2);
      cfg.seed = parse_uint64(tok[1], ln);
    } else if (d == "trials") {
      need(2);
      cfg.trials = parse_uint64(tok[1], ln);
    } else if (d == "budget") {
      need(2);
      cfg.budget = parse_uint64(tok[1], ln);
    } else if (d == "threads") {
      need(2);
      cfg.threads = parse_int(tok[1], ln);
    } else if (d == "out") {
      need(2);
      cfg.out = std::string(tok[1]);
    } else if (d == "solver") {
      need(3);
      set_solver_key(cfg.solver, tok[1], tok[2], ln);
    } else if (d == "instance") {
      cfg.instances.push_back(parse_instance_spec(tok, ln));
    } else {
      throw ParseError(ln, "unknown directive '" + std::string(d) + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(lines.back().number, e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_file(path));
}

std::vector<ExpandedInstance> expand(const ExperimentConfig& cfg) {
  std::vector<ExpandedInstance> out;
  for (const auto& spec : cfg.instances)
    for (int c = 0; c < spec.count; ++c) {
      const std::size_t id = out.size();
      out.push_back({id, derive_seed(cfg.seed, stream::kExperiment, id), spec});
    }
  return out;
}

ExperimentRecord run_instance(const ExperimentConfig& cfg, const ExpandedInstance& inst) {
  const auto start = std::chrono::steady_clock::now();
  const InstanceSpec& s = inst.spec;
  std::optional<Instance> instance;
  std::vector<Assignment> hints;
  switch (s.family) {
    case Family::kExample: instance = example_instance(); break;
    case Family::k2Lin: instance = gen_2lin(s.n, s.R, s.m, inst.seed); break;
    case Family::kRandom: instance = gen_random_2csp(s.n, s.R, s.m, s.density, inst.seed); break;
    case Family::kUniqueGame: {
      auto g = gen_unique_game(s.n, s.R, s.m, inst.seed, s.planted);
      instance = std::move(g.instance);
      if (g.planted) hints.push_back(*g.planted);
      break;
    }
  }
  const AtomicInstance atomic = normalize(*instance);

  ExperimentRecord r;
  r.suite = cfg.suite;
  r.instance_id = inst.id;
  r.seed = inst.seed;
  r.family = s.family;
  r.n = instance->num_variables();
  r.R = instance->domain_size();
  r.m = static_cast<int>(instance->num_constraints());
  r.atoms = atomic.atoms.size();
  r.trials = cfg.trials;
  if (within_budget(r.n, r.R, cfg.budget)) r.opt_exact = brute_force(*instance, cfg.budget).value;

  SolverConfig sc = cfg.solver;
  sc.seed = inst.seed;
  const SolveResult sr = solve(atomic, sc, hints);
  r.sdp_value = sr.report.objective;
  r.sdp_converged = sr.converged;

  const RoundingStats naive = naive_stats(sr.solution, atomic, cfg.trials, inst.seed);
  r.naive_mean = naive.mean;
  r.naive_stddev = naive.stddev;
  const auto [best, st] = best_of(sr.solution, atomic, cfg.trials, inst.seed);
  r.shortlist_mean = st.mean;
  r.shortlist_stddev = st.stddev;
  r.shortlist_best = st.max;
  r.mean_shortlist_size = st.mean_shortlist_size;
  r.empty_shortlist_rate = st.empty_rate;
  if (r.sdp_value > 0.0) {
    r.ratio_naive = r.naive_mean / r.sdp_value;
    r.ratio_shortlist = r.shortlist_mean / r.sdp_value;
  }
  r.measured_kappa = r.ratio_shortlist * r.R / std::log(static_cast<double>(r.R));
  if (cfg.timing)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto jobs = expand(cfg);
  std::vector<ExperimentRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      try {
        records[k] = run_instance(cfg, jobs[k]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const auto& r : records) {
    const std::string fields[] = {
        csv_field(r.suite),
        std::to_string(r.instance_id),
        std::to_string(r.seed),
        std::to_string(r.n),
        std::to_string(r.R),
        std::to_string(r.m),
        std::to_string(r.atoms),
        opt(r.opt_exact),
        format_real(r.sdp_value),
        r.sdp_converged ? "1" : "0",
        format_real(r.naive_mean),
        format_real(r.shortlist_mean),
        format_real(r.shortlist_best),
        format_real(r.ratio_naive),
        format_real(r.ratio_shortlist),
        format_real(r.measured_kappa),
        format_real(r.mean_shortlist_size),
        format_real(r.empty_shortlist_rate),
        opt(r.wall_ms),
    };
    for (std::size_t k = 0; k < std::size(fields); ++k) {
      if (k) out += ',';
      out += fields[k];
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
  write_file_atomic(path, to_csv(records));
}

}  // namespace max2csp
