#include "max2csp/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "max2csp/random.hpp"

namespace max2csp {

VectorSolution::VectorSolution(int n, int R, int dim)
    : n_(n), R_(R), dim_(dim), data_(static_cast<std::size_t>(n) * R * dim, 0.0) {
  if (n < 1 || R < 2 || dim < 1) throw std::invalid_argument("VectorSolution: bad shape");
}

std::span<double> VectorSolution::vec(int i, int a) {
  return {data_.data() + (static_cast<std::size_t>(i) * R_ + a) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::span<const double> VectorSolution::vec(int i, int a) const {
  return {data_.data() + (static_cast<std::size_t>(i) * R_ + a) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::span<double> VectorSolution::block(int i) {
  return {data_.data() + static_cast<std::size_t>(i) * R_ * dim_,
          static_cast<std::size_t>(R_) * dim_};
}

std::span<const double> VectorSolution::block(int i) const {
  return {data_.data() + static_cast<std::size_t>(i) * R_ * dim_,
          static_cast<std::size_t>(R_) * dim_};
}

double VectorSolution::inner(int i, int a, int j, int b) const {
  const auto x = vec(i, a);
  const auto y = vec(j, b);
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) s += x[k] * y[k];
  return s;
}

double VectorSolution::norm(int i, int a) const { return std::sqrt(inner(i, a, i, a)); }

std::string to_string(NonnegScope scope) {
  switch (scope) {
    case NonnegScope::kAtoms:
      return "atoms";
    case NonnegScope::kEdges:
      return "edges";
    case NonnegScope::kAll:
      return "all";
  }
  return "edges";
}

NonnegScope parse_scope(const std::string& s) {
  if (s == "atoms") return NonnegScope::kAtoms;
  if (s == "edges") return NonnegScope::kEdges;
  if (s == "all") return NonnegScope::kAll;
  throw std::invalid_argument("unknown nonnegativity scope '" + s + "'");
}

void SolverConfig::validate() const {
  if (dim != 0 && dim < 2) throw std::invalid_argument("solver dim must be >= 2 (or 0 = auto)");
  if (max_outer < 1 || max_inner < 1) throw std::invalid_argument("solver iteration caps must be >= 1");
  if (!(penalty_init > 0.0)) throw std::invalid_argument("penalty_init must be positive");
  if (!(penalty_growth > 1.0)) throw std::invalid_argument("penalty_growth must exceed 1");
  if (!(tol_feas > 0.0) || !(tol_obj > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (candidate_trials < 0) throw std::invalid_argument("candidate_trials must be >= 0");
}

int default_dim(int n, int R, NonnegScope scope) {
  if (scope != NonnegScope::kAtoms) return std::min(n * R, std::max(50, 6 * R));
  return std::max(R, std::min(n * R, 50));
}

VectorSolution embed_in_dim(const Assignment& z, int n, int R, int dim) {
  check_assignment(n, R, z);
  if (!z.fully_assigned()) throw std::invalid_argument("embed: assignment has unassigned entries");
  VectorSolution sol(n, R, dim);
  for (int i = 0; i < n; ++i) sol.vec(i, z[i])[0] = 1.0;
  return sol;
}

VectorSolution embed(const Assignment& z, const AtomicInstance& atomic) {
  return embed_in_dim(z, atomic.n, atomic.R, 1);
}

namespace {

void check_shape(const VectorSolution& sol, const AtomicInstance& atomic) {
  if (sol.num_variables() != atomic.n || sol.domain_size() != atomic.R)
    throw std::invalid_argument("solution shape does not match the instance");
}

}  // namespace

double objective(const VectorSolution& sol, const AtomicInstance& atomic) {
  check_shape(sol, atomic);
  double total = 0.0;
  for (const auto& at : atomic.atoms) total += at.weight * sol.inner(at.i, at.a, at.j, at.b);
  return total;
}

FeasibilityReport feasibility(const VectorSolution& sol, const AtomicInstance& atomic,
                              NonnegScope scope) {
  check_shape(sol, atomic);
  const int n = atomic.n;
  const int R = atomic.R;
  FeasibilityReport rep;
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int a = 0; a < R; ++a) {
      mass += sol.inner(i, a, i, a);
      for (int b = a + 1; b < R; ++b)
        rep.max_ortho_violation = std::max(rep.max_ortho_violation, std::abs(sol.inner(i, a, i, b)));
    }
    rep.max_norm_violation = std::max(rep.max_norm_violation, std::abs(mass - 1.0));
  }
  double min_inner = std::numeric_limits<double>::infinity();
  auto all_values = [&](int i, int j) {
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b) min_inner = std::min(min_inner, sol.inner(i, a, j, b));
  };
  switch (scope) {
    case NonnegScope::kAtoms:
      for (const auto& at : atomic.atoms)
        min_inner = std::min(min_inner, sol.inner(at.i, at.a, at.j, at.b));
      break;
    case NonnegScope::kEdges: {
      std::vector<std::pair<int, int>> pairs;
      for (const auto& at : atomic.atoms) pairs.emplace_back(at.i, at.j);
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      for (auto [i, j] : pairs) all_values(i, j);
      break;
    }
    case NonnegScope::kAll:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all_values(i, j);
      break;
  }
  rep.min_constraint_pair_inner = std::isinf(min_inner) ? 0.0 : min_inner;
  rep.objective = objective(sol, atomic);
  return rep;
}

namespace {

using Mat = Eigen::MatrixXd;

// Variable pair (i < j) with the atom weights and nonnegativity mask on its
// R x R grid of value pairs.
struct Edge {
  int i;
  int j;
  Mat weight;
  Mat mask;
  // Cells with a weight or a constraint; used instead of the dense R x R
  // products when they are few.
  struct Cell {
    int a;
    int b;
    double weight;
    bool masked;
  };
  std::vector<Cell> cells;
  bool dense = true;
};

struct Problem {
  int n = 0;
  int R = 0;
  int dim = 0;
  std::vector<Edge> edges;
};

Problem build_problem(const AtomicInstance& atomic, NonnegScope scope, int dim) {
  Problem p{atomic.n, atomic.R, dim, {}};
  std::map<std::pair<int, int>, std::size_t> index;
  auto edge_of = [&](int i, int j) -> Edge& {
    auto [it, inserted] = index.try_emplace({i, j}, p.edges.size());
    if (inserted) p.edges.push_back({i, j, Mat::Zero(p.R, p.R), Mat::Zero(p.R, p.R), {}, true});
    return p.edges[it->second];
  };
  if (scope == NonnegScope::kAll)
    for (int i = 0; i < p.n; ++i)
      for (int j = i + 1; j < p.n; ++j) edge_of(i, j);
  for (const auto& at : atomic.atoms) {
    Edge& e = edge_of(at.i, at.j);  // atoms are oriented i < j by normalize
    e.weight(at.a, at.b) += at.weight;
    if (scope == NonnegScope::kAtoms) e.mask(at.a, at.b) = 1.0;
  }
  if (scope != NonnegScope::kAtoms)
    for (auto& e : p.edges) e.mask.setOnes();
  for (auto& e : p.edges) {
    for (int a = 0; a < p.R; ++a)
      for (int b = 0; b < p.R; ++b)
        if (e.weight(a, b) != 0.0 || e.mask(a, b) != 0.0)
          e.cells.push_back({a, b, e.weight(a, b), e.mask(a, b) != 0.0});
    e.dense = 4 * e.cells.size() > static_cast<std::size_t>(p.R) * p.R;
  }
  return p;
}

struct Evaluation {
  double lagrangian = 0.0;
  double objective = 0.0;
  double max_violation = 0.0;
};

double dot_cols(const Mat& X, int a, const Mat& Y, int b) { return X.col(a).dot(Y.col(b)); }

// Augmented Lagrangian for  max f(X)  s.t.  C_e(a, b) >= 0  on masked entries:
//   L = f - (1 / 2 mu) sum [ max(0, lambda - mu C)^2 - lambda^2 ].
Evaluation evaluate(const Problem& P, const std::vector<Mat>& X, double mu,
                    const std::vector<Mat>& lambda, std::vector<Mat>* grad) {
  Evaluation ev;
  if (grad)
    for (auto& g : *grad) g.setZero();
  double penalty = 0.0;
  for (std::size_t k = 0; k < P.edges.size(); ++k) {
    const Edge& e = P.edges[k];
    if (!e.dense) {
      for (const auto& c : e.cells) {
        const double C = dot_cols(X[e.i], c.a, X[e.j], c.b);
        ev.objective += c.weight * C;
        double M = c.weight;
        if (c.masked) {
          const double l = lambda[k](c.a, c.b);
          const double h = std::max(0.0, l - mu * C);
          penalty += (h * h - l * l) / (2.0 * mu);
          ev.max_violation = std::max(ev.max_violation, -C);
          M += h;
        }
        if (grad && M != 0.0) {
          (*grad)[e.i].col(c.a) += M * X[e.j].col(c.b);
          (*grad)[e.j].col(c.b) += M * X[e.i].col(c.a);
        }
      }
      continue;
    }
    const Mat C = X[e.i].transpose() * X[e.j];
    ev.objective += e.weight.cwiseProduct(C).sum();
    const Mat H = (lambda[k] - mu * C).cwiseMax(0.0).cwiseProduct(e.mask);
    penalty += (H.squaredNorm() - lambda[k].squaredNorm()) / (2.0 * mu);
    ev.max_violation = std::max(ev.max_violation, (-C).cwiseProduct(e.mask).maxCoeff());
    if (grad) {
      const Mat M = e.weight + H;
      (*grad)[e.i].noalias() += X[e.j] * M.transpose();
      (*grad)[e.j].noalias() += X[e.i] * M;
    }
  }
  ev.lagrangian = ev.objective - penalty;
  return ev;
}

// lambda <- max(0, lambda - mu C) on masked cells; returns the worst violation.
double update_multipliers(const Edge& e, const Mat& Xi, const Mat& Xj, double mu, Mat& lambda) {
  double violation = 0.0;
  if (!e.dense) {
    for (const auto& c : e.cells) {
      if (!c.masked) continue;
      const double C = dot_cols(Xi, c.a, Xj, c.b);
      violation = std::max(violation, -C);
      lambda(c.a, c.b) = std::max(0.0, lambda(c.a, c.b) - mu * C);
    }
    return violation;
  }
  const Mat C = Xi.transpose() * Xj;
  lambda = (lambda - mu * C).cwiseMax(0.0).cwiseProduct(e.mask);
  return std::max(0.0, (-C).cwiseProduct(e.mask).maxCoeff());
}

double edge_objective(const Edge& e, const Mat& Xi, const Mat& Xj) {
  double f = 0.0;
  for (const auto& c : e.cells) f += c.weight * dot_cols(Xi, c.a, Xj, c.b);
  return f;
}

// Projects G onto the tangent space of {X : X^T X diagonal, tr(X^T X) = 1}
// at a point X with orthogonal columns. The normals N_ab (a < b) and X are
// mutually orthogonal there, so the projection is diagonal.
Mat project_tangent(const Mat& X, const Mat& G) {
  const Eigen::VectorXd r2 = X.colwise().squaredNorm().transpose();
  const Mat S = G.transpose() * X;
  const Eigen::Index R = X.cols();
  Mat coef = Mat::Zero(R, R);
  for (Eigen::Index a = 0; a < R; ++a) {
    for (Eigen::Index b = a + 1; b < R; ++b) {
      const double den = r2(a) + r2(b);
      if (den > 1e-300) coef(a, b) = coef(b, a) = (S(a, b) + S(b, a)) / den;
    }
  }
  const double tau = S.trace();
  return G - X * coef - tau * X;
}

// Gram-Schmidt keeping column lengths (each column orthogonalized twice
// against the earlier ones), then unit total mass.
void retract(Mat& X) {
  const Eigen::Index R = X.cols();
  Eigen::VectorXd r2(R);
  Eigen::VectorXd coef(R);
  for (Eigen::Index a = 0; a < R; ++a) {
    if (a > 0) {
      const auto prev = X.leftCols(a);
      for (int pass = 0; pass < 2; ++pass) {
        coef.head(a).noalias() = prev.transpose() * X.col(a);
        for (Eigen::Index b = 0; b < a; ++b) coef(b) = r2(b) > 0.0 ? coef(b) / r2(b) : 0.0;
        X.col(a).noalias() -= prev * coef.head(a);
      }
    }
    r2(a) = X.col(a).squaredNorm();
    if (r2(a) < 1e-30) {
      X.col(a).setZero();
      r2(a) = 0.0;
    }
  }
  const double mass = r2.sum();
  if (mass <= 0.0) {
    X.setZero();
    X(0, 0) = 1.0;
    return;
  }
  X /= std::sqrt(mass);
}

double tangent_norm2(const std::vector<Mat>& xi) {
  double s = 0.0;
  for (const auto& m : xi) s += m.squaredNorm();
  return s;
}

struct RunResult {
  std::vector<Mat> X;
  double objective = 0.0;
  double max_violation = 0.0;
  bool converged = false;
  int outer = 0;
  int inner = 0;
};

double inner_product(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

RunResult run_augmented_lagrangian(const Problem& P, std::vector<Mat> X, const SolverConfig& cfg,
                                   double weight_scale) {
  const std::size_t nE = P.edges.size();
  std::vector<Mat> lambda(nE, Mat::Zero(P.R, P.R));
  std::vector<Mat> grad(P.n, Mat::Zero(P.dim, P.R));
  std::vector<Mat> xi(P.n);
  std::vector<Mat> dir(P.n);
  std::vector<Mat> trial(P.n);
  std::vector<Mat> trial_grad(P.n, Mat::Zero(P.dim, P.R));
  std::vector<Mat> trial_xi(P.n);

  for (auto& x : X) retract(x);
  double mu = cfg.penalty_init;
  double prev_violation = std::numeric_limits<double>::infinity();
  double prev_objective = std::numeric_limits<double>::quiet_NaN();
  const double scale = std::max(1.0, weight_scale);
  const double grad_tol = 1e-7 * scale;

  RunResult out;
  int settled_rounds = 0;
  double step = 0.5 / scale;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    out.outer = outer + 1;
    // Inexact inner solves early on, exact ones once the multipliers settle.
    const double inner_tol = std::max(grad_tol, scale * std::pow(0.1, outer + 1));
    Evaluation ev = evaluate(P, X, mu, lambda, &grad);
    for (int i = 0; i < P.n; ++i) xi[i] = project_tangent(X[i], grad[i]);
    double g2 = tangent_norm2(xi);
    dir = xi;
    double slope = g2;
    bool stationary = false;
    int stalls = 0;
    bool retried = false;
    for (int it = 0; it < cfg.max_inner; ++it) {
      if (std::sqrt(g2) <= inner_tol) {
        stationary = true;
        break;
      }
      if (slope <= 1e-3 * std::sqrt(g2 * tangent_norm2(dir))) {
        dir = xi;  // not an ascent direction: restart
        slope = g2;
      }
      bool accepted = false;
      Evaluation tev;
      while (step * std::sqrt(tangent_norm2(dir)) > 1e-15) {
        for (int i = 0; i < P.n; ++i) {
          trial[i] = X[i] + step * dir[i];
          retract(trial[i]);
        }
        tev = evaluate(P, trial, mu, lambda, &trial_grad);
        if (tev.lagrangian >= ev.lagrangian + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++out.inner;
      if (!accepted) {
        if (!retried) {  // retry once along the gradient from a fresh step
          retried = true;
          dir = xi;
          slope = g2;
          step = 0.5 / scale;
          continue;
        }
        stationary = true;  // no ascent at machine precision
        step = 0.5 / scale;
        break;
      }
      retried = false;
      const double gain = tev.lagrangian - ev.lagrangian;
      for (int i = 0; i < P.n; ++i) trial_xi[i] = project_tangent(trial[i], trial_grad[i]);
      // Polak-Ribiere+. Transport is projection onto the new tangent space,
      // and <xi', P(xi)> = <xi', xi> since xi' is already tangent there.
      double num = 0.0;
      for (int i = 0; i < P.n; ++i) num += trial_xi[i].cwiseProduct(trial_xi[i] - xi[i]).sum();
      const double beta = std::max(0.0, num / g2);
      for (int i = 0; i < P.n; ++i) dir[i] = trial_xi[i] + beta * project_tangent(trial[i], dir[i]);
      std::swap(X, trial);
      std::swap(grad, trial_grad);
      std::swap(xi, trial_xi);
      ev = tev;
      g2 = tangent_norm2(xi);
      const double new_slope = inner_product(xi, dir);
      if (new_slope > 0.0) step = std::min(step * std::clamp(2.0 * slope / new_slope, 0.1, 4.0), 1e3);
      slope = new_slope;
      stalls = gain <= 1e-15 * std::max(1.0, std::abs(ev.lagrangian)) ? stalls + 1 : 0;
      if (stalls >= 5) {
        stationary = true;
        break;
      }
    }

    // Multiplier and penalty updates.
    double violation = 0.0;
    for (std::size_t k = 0; k < nE; ++k) {
      const Edge& e = P.edges[k];
      violation = std::max(violation, update_multipliers(e, X[e.i], X[e.j], mu, lambda[k]));
    }
    out.objective = ev.objective;
    out.max_violation = violation;
    const bool objective_settled =
        std::abs(ev.objective - prev_objective) <= cfg.tol_obj * std::max(1.0, std::abs(ev.objective));
    settled_rounds = objective_settled ? settled_rounds + 1 : 0;
    // Near zero-length vectors the ascent is only linear; two quiet rounds
    // stand in for the gradient reaching grad_tol.
    const bool settled = (stationary && inner_tol <= grad_tol && objective_settled) || settled_rounds >= 2;
    if (violation <= cfg.tol_feas && settled) {
      out.converged = true;
      break;
    }
    if (violation > cfg.tol_feas && violation > 0.25 * prev_violation) mu = std::min(mu * cfg.penalty_growth, 1e12);
    prev_violation = violation;
    prev_objective = ev.objective;
  }
  out.X = std::move(X);
  // The last multiplier update changed L but not X; report the plain objective.
  double f = 0.0;
  for (const auto& e : P.edges) f += edge_objective(e, out.X[e.i], out.X[e.j]);
  out.objective = f;
  return out;
}

VectorSolution to_solution(const Problem& P, const std::vector<Mat>& X) {
  VectorSolution sol(P.n, P.R, P.dim);
  for (int i = 0; i < P.n; ++i) {
    auto blk = sol.block(i);
    Eigen::Map<Mat>(blk.data(), P.dim, P.R) = X[i];
  }
  return sol;
}

std::vector<Mat> from_assignment(const Problem& P, const Assignment& z, double noise, Rng& rng) {
  std::normal_distribution<double> normal(0.0, noise);
  std::vector<Mat> X(P.n, Mat::Zero(P.dim, P.R));
  for (int i = 0; i < P.n; ++i) {
    if (noise > 0.0)
      for (Eigen::Index c = 0; c < X[i].size(); ++c) X[i](c) = normal(rng);
    X[i](0, z[i]) += 1.0;
  }
  return X;
}

// 1-opt hill climbing on the atomic objective, starting from z.
double hill_climb(const AtomicInstance& atomic, const std::vector<std::vector<std::size_t>>& incident,
                  Assignment& z) {
  const int R = atomic.R;
  std::vector<double> gain(R);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int v = 0; v < atomic.n; ++v) {
      std::fill(gain.begin(), gain.end(), 0.0);
      for (std::size_t k : incident[v]) {
        const Atom& at = atomic.atoms[k];
        if (at.i == v) {
          if (z[at.j] == at.b) gain[at.a] += at.weight;
        } else if (z[at.i] == at.a) {
          gain[at.b] += at.weight;
        }
      }
      const int best = static_cast<int>(std::max_element(gain.begin(), gain.end()) - gain.begin());
      if (gain[best] > gain[z[v]] + 1e-12) {
        z[v] = best;
        improved = true;
      }
    }
  }
  return score(atomic, z);
}

}  // namespace

SolveResult solve(const AtomicInstance& atomic, const SolverConfig& cfg,
                  std::span<const Assignment> hints) {
  cfg.validate();
  if (atomic.n < 1 || atomic.R < 2) throw std::invalid_argument("solve: empty instance");
  const int dim = cfg.dim == 0 ? default_dim(atomic.n, atomic.R, cfg.scope) : cfg.dim;
  const Problem P = build_problem(atomic, cfg.scope, dim);

  // Integral candidates: caller hints, then hill-climbed random assignments.
  std::vector<std::vector<std::size_t>> incident(atomic.n);
  for (std::size_t k = 0; k < atomic.atoms.size(); ++k) {
    incident[atomic.atoms[k].i].push_back(k);
    incident[atomic.atoms[k].j].push_back(k);
  }
  Assignment best_z = Assignment(std::vector<int>(atomic.n, 0));
  double best_integral = score(atomic, best_z);
  for (const auto& h : hints) {
    check_assignment(atomic.n, atomic.R, h);
    if (!h.fully_assigned()) throw std::invalid_argument("solve: hints must be fully assigned");
    const double s = score(atomic, h);
    if (s > best_integral) {
      best_integral = s;
      best_z = h;
    }
  }
  {
    Rng rng = make_rng(cfg.seed, stream::kSolverCandidates);
    std::uniform_int_distribution<int> value(0, atomic.R - 1);
    for (int t = 0; t < cfg.candidate_trials; ++t) {
      Assignment z = Assignment::unassigned(atomic.n);
      for (int i = 0; i < atomic.n; ++i) z[i] = value(rng);
      const double s = hill_climb(atomic, incident, z);
      if (s > best_integral) {
        best_integral = s;
        best_z = std::move(z);
      }
    }
  }

  const double weight_scale = std::max(1.0, atomic.total_weight / std::max(1, atomic.n));
  Rng init_rng = make_rng(cfg.seed, stream::kSolverInit);
  std::vector<Mat> X0(atomic.n, Mat::Zero(dim, atomic.R));
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& x : X0)
      for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = normal(init_rng);
  }
  RunResult run = run_augmented_lagrangian(P, std::move(X0), cfg, weight_scale);

  const double slack = cfg.tol_obj * std::max(1.0, best_integral);
  if (run.objective < best_integral - slack) {
    // Cold start stalled below an integral point; restart next to it.
    RunResult warm = run_augmented_lagrangian(P, from_assignment(P, best_z, 1e-3, init_rng), cfg,
                                              weight_scale);
    const bool warm_ok = warm.max_violation <= cfg.tol_feas;
    const bool run_ok = run.max_violation <= cfg.tol_feas;
    if (warm_ok && (!run_ok || warm.objective > run.objective)) {
      warm.outer += run.outer;
      warm.inner += run.inner;
      run = std::move(warm);
    }
  }

  SolveResult res;
  res.best_integral = best_integral;
  res.outer_rounds = run.outer;
  res.inner_steps = run.inner;
  if (run.objective < best_integral - slack || run.max_violation > cfg.tol_feas * 1e3) {
    res.solution = embed_in_dim(best_z, atomic.n, atomic.R, dim);
    res.integral_fallback = true;
    res.converged = run.converged;
  } else {
    res.solution = to_solution(P, run.X);
    res.converged = run.converged;
  }
  res.report = feasibility(res.solution, atomic, cfg.scope);
  return res;
}

}  // namespace max2csp
