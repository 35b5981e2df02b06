#include "max2csp/gaussian_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "max2csp/text.hpp"

namespace max2csp::gaussian {
namespace {

void check_probe(const ChangeBoundProbe& probe) {
  if (!(probe.t > 0.0)) throw std::invalid_argument("probe needs t > 0");
  if (!(probe.alpha >= 0.0 && probe.alpha <= 1.0))
    throw std::invalid_argument("probe needs alpha in [0, 1]");
}

double ln_inv_tail(double p) { return -std::log(p); }

}  // namespace

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("grid: bad range");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = lo + static_cast<double>(k) * step;
  out.back() = std::min(out.back(), hi);
  return out;
}

LnPMargins check_ln_p_bound(double t) {
  const double l = ln_inv_tail(tail(t));
  return {l - 0.5 * t * t, t * t - l};
}

double check_lower_change(const ChangeBoundProbe& probe) {
  check_probe(probe);
  const double p = tail(probe.t);
  return tail((1.0 - probe.alpha) * probe.t) - probe.alpha * p * ln_inv_tail(p);
}

double check_upper_power(const ChangeBoundProbe& probe) {
  check_probe(probe);
  const double p = tail(probe.t);
  return std::pow(p, 1.0 - 3.0 * probe.alpha) - tail((1.0 - probe.alpha) * probe.t);
}

double check_small_shift(const ChangeBoundProbe& probe) {
  check_probe(probe);
  if (probe.alpha > 1.0 / (probe.t * probe.t) * (1.0 + 1e-12))
    throw std::invalid_argument("small-shift check needs alpha <= 1/t^2");
  return kSmallShiftConstant * tail(probe.t) - tail((1.0 - probe.alpha) * probe.t);
}

double ThresholdProfile::advantage_sq() const {
  double s2 = 0.0;
  for (double s : advantages) s2 += s * s;
  return s2;
}

double ThresholdProfile::t_min() const {
  return *std::min_element(thresholds.begin(), thresholds.end());
}

double ThresholdProfile::t_max() const {
  return *std::max_element(thresholds.begin(), thresholds.end());
}

double ThresholdProfile::tail_sum() const {
  double s = 0.0;
  for (double t : thresholds) s += tail(t);
  return s;
}

AdvantageBound check_threshold_advantage(const ThresholdProfile& profile, double ell,
                                         double constant) {
  if (profile.thresholds.empty() || profile.thresholds.size() != profile.advantages.size())
    throw std::invalid_argument("profile needs matching, nonempty thresholds and advantages");
  if (!(ell > 0.0 && ell < 1.0)) throw std::invalid_argument("ell must lie in (0, 1)");
  for (double t : profile.thresholds)
    if (!(t > 0.0)) throw std::invalid_argument("profile thresholds must be positive");
  for (double s : profile.advantages)
    if (!(s >= 0.0)) throw std::invalid_argument("profile advantages must be nonnegative");
  if (profile.tail_sum() > 1.0 + 1e-12)
    throw std::invalid_argument("profile violates sum_b p(t_b) <= 1");

  AdvantageBound out;
  for (std::size_t b = 0; b < profile.thresholds.size(); ++b)
    out.lhs += tail(profile.thresholds[b] - profile.advantages[b]);

  const double tmin = profile.t_min();
  const double tmax = profile.t_max();
  const double t4 = tmax * tmax * tmax * tmax;
  const double medium = tail(tmin) * t4 / std::pow(tail(tmax), 3.0 * ell);
  out.rhs = constant * (1.0 + profile.advantage_sq() / (tmin * tmin) * (1.0 / ell + medium));
  return out;
}

ThresholdProfile sample_threshold_profile(int R, Rng& rng) {
  if (R < 2) throw std::invalid_argument("profile needs R >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> support(1, R);

  auto random_direction = [&](std::vector<double>& out) {
    // Nonnegative direction supported on a random subset of coordinates.
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<int> idx(R);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const int k = support(rng);
    double n2 = 0.0;
    for (int q = 0; q < k; ++q) {
      const double x = std::abs(normal(rng)) + 1e-12;
      out[idx[q]] = x;
      n2 += x * x;
    }
    const double nrm = std::sqrt(n2);
    for (double& x : out) x /= nrm;
  };

  const double logR = std::log(static_cast<double>(R));
  const double t_floor = 0.5 * std::sqrt(logR);
  ThresholdProfile prof;
  prof.thresholds.resize(R);
  prof.advantages.resize(R);

  std::vector<double> dir(R);
  random_direction(dir);
  const double sqrtR = std::sqrt(static_cast<double>(R));
  for (int b = 0; b < R; ++b) {
    const double p = 0.5 * (dir[b] / sqrtR + 1.0 / R);
    prof.thresholds[b] = std::max(inv_tail(p), t_floor);
  }

  // Half the draws spread s^2 uniformly, half log-uniformly down to 1e-4 of the cap.
  const double cap = 400.0 * logR;
  const double u = unit(rng);
  const double s2 = unit(rng) < 0.5 ? cap * u : cap * std::pow(1e-4, u);
  random_direction(dir);
  const double s = std::sqrt(s2);
  for (int b = 0; b < R; ++b) prof.advantages[b] = s * dir[b];
  return prof;
}

WedgeReport check_wedge_bounds(std::span<const double> u, std::span<const double> v, double t1,
                               double t2, std::size_t samples, Rng& rng) {
  if (u.size() != v.size() || u.empty()) throw std::invalid_argument("wedge: size mismatch");
  if (std::abs(norm(u) - 1.0) > 1e-9 || std::abs(norm(v) - 1.0) > 1e-9)
    throw std::invalid_argument("wedge: u and v must be unit vectors");
  const double c = dot(u, v);
  if (c < 0.0) throw std::invalid_argument("wedge: inner product must be nonnegative");
  if (!(t1 >= 1.0 && t1 <= t2 && t2 <= 4.0 * t1))
    throw std::invalid_argument("wedge: need 1 <= t1 <= t2 <= 4 t1");
  if (samples == 0) throw std::invalid_argument("wedge: samples must be positive");

  // Orthonormal basis of span{u, v}.
  const std::size_t dim = u.size();
  std::vector<double> e2(dim, 0.0);
  double e2n = 0.0;
  for (std::size_t k = 0; k < dim; ++k) e2[k] = v[k] - c * u[k];
  e2n = norm(e2);
  const bool planar = e2n > 1e-12;
  if (planar)
    for (double& x : e2) x /= e2n;

  WedgeReport r;
  r.t1 = t1;
  r.t2 = t2;
  r.inner = c;
  r.samples = samples;
  r.narrow_range = t2 <= 2.0 * t1;

  std::vector<double> g(dim);
  std::size_t joint = 0;
  std::size_t big = 0;
  const double big_sq = 100.0 * t1 * t1;
  for (std::size_t s = 0; s < samples; ++s) {
    fill_gaussian(g, rng);
    const double gu = dot(g, u);
    const double gv = dot(g, v);
    if (gu > t1 && gv > t2) {
      ++joint;
      const double g2 = planar ? dot(g, e2) : 0.0;
      if (gu * gu + g2 * g2 > big_sq) ++big;
    }
  }
  const double N = static_cast<double>(samples);
  r.joint_estimate = static_cast<double>(joint) / N;
  r.joint_bound = tail(t1) * tail(t2);
  const double q = std::max(r.joint_estimate, r.joint_bound);
  r.joint_sigma = std::sqrt(q * (1.0 - q) / N);
  r.joint_ok = r.joint_estimate >= r.joint_bound - 3.0 * r.joint_sigma;

  r.joint_count = joint;
  if (joint > 0) {
    r.norm_tail_estimate = static_cast<double>(big) / static_cast<double>(joint);
    r.norm_tail_sigma = std::sqrt(0.25 / static_cast<double>(joint));
    r.norm_tail_ok = r.norm_tail_estimate <= 0.5 + 3.0 * r.norm_tail_sigma;
  } else {
    r.norm_tail_ok = true;  // conditioning event never observed
  }
  return r;
}

namespace {

CheckReport finish(std::string id, std::size_t n, double min_margin, double slack,
                   std::string note = {}) {
  return {std::move(id), n, min_margin, min_margin >= -slack, std::move(note)};
}

std::string at(double t, double alpha) {
  return "worst at t=" + format_real(t) + " alpha=" + format_real(alpha);
}

}  // namespace

CheckReport verify_tail_sandwich(const VerifyOptions& opt) {
  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  const auto ts = grid(opt.sandwich_t_lo, opt.t_hi, opt.t_step);
  for (double t : ts) {
    const auto b = tail_bounds(t);
    const double p = tail(t);
    const double m = std::min(p - b.lower, b.upper - p);
    if (m < worst) {
      worst = m;
      worst_t = t;
    }
  }
  return finish("tail-sandwich", ts.size(), worst, opt.slack, "worst at t=" + format_real(worst_t));
}

CheckReport verify_ln_p_bound(const VerifyOptions& opt) {
  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  const auto ts = grid(opt.t_lo, opt.t_hi, opt.t_step);
  for (double t : ts) {
    const auto m = check_ln_p_bound(t);
    const double w = std::min(m.lower, m.upper);
    if (w < worst) {
      worst = w;
      worst_t = t;
    }
  }
  return finish("ln-tail-bound", ts.size(), worst, opt.slack, "worst at t=" + format_real(worst_t));
}

namespace {

template <class Check>
CheckReport sweep_alpha(const char* id, const VerifyOptions& opt, Check check) {
  double worst = std::numeric_limits<double>::infinity();
  double wt = 0.0;
  double wa = 0.0;
  std::size_t n = 0;
  const auto ts = grid(opt.t_lo, opt.t_hi, opt.t_step);
  const auto as = grid(0.0, 1.0, opt.alpha_step);
  for (double t : ts) {
    for (double a : as) {
      const double m = check(ChangeBoundProbe{t, a});
      ++n;
      if (m < worst) {
        worst = m;
        wt = t;
        wa = a;
      }
    }
  }
  return finish(id, n, worst, opt.slack, at(wt, wa));
}

}  // namespace

CheckReport verify_lower_change(const VerifyOptions& opt) {
  return sweep_alpha("lower-change", opt, check_lower_change);
}

CheckReport verify_upper_power(const VerifyOptions& opt) {
  return sweep_alpha("upper-power", opt, check_upper_power);
}

CheckReport verify_small_shift(const VerifyOptions& opt) {
  double worst = std::numeric_limits<double>::infinity();
  double sup_ratio = 0.0;
  double wt = 0.0;
  double wa = 0.0;
  std::size_t n = 0;
  for (double t : grid(opt.t_lo, opt.t_hi, opt.t_step)) {
    const double amax = 1.0 / (t * t);
    std::vector<double> as;
    for (double a = 0.0; a < amax; a += opt.alpha_step) as.push_back(a);
    as.push_back(amax);
    for (double a : as) {
      const double m = check_small_shift({t, a});
      sup_ratio = std::max(sup_ratio, tail((1.0 - a) * t) / tail(t));
      ++n;
      if (m < worst) {
        worst = m;
        wt = t;
        wa = a;
      }
    }
  }
  return finish("small-shift", n, worst, opt.slack,
                at(wt, wa) + "; measured sup p((1-a)t)/p(t) = " + format_real(sup_ratio) +
                    " vs constant e^3");
}

std::vector<CheckReport> verify_wedges(const VerifyOptions& opt) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_joint = std::numeric_limits<double>::infinity();
  double worst_norm = std::numeric_limits<double>::infinity();
  double worst_norm_narrow = std::numeric_limits<double>::infinity();
  std::size_t narrow = 0;
  std::size_t informative = 0;
  bool ok_joint = true;
  bool ok_norm = true;
  bool ok_norm_narrow = true;
  for (std::size_t k = 0; k < opt.wedge_pairs; ++k) {
    Rng rng = make_rng(opt.seed, stream::kGaussianCheck, k);
    auto u = sample_gaussian_vector(opt.wedge_dim, rng);
    auto v = sample_gaussian_vector(opt.wedge_dim, rng);
    const double nu = norm(u);
    const double nv = norm(v);
    for (double& x : u) x /= nu;
    for (double& x : v) x /= nv;
    if (dot(u, v) < 0.0)
      for (double& x : v) x = -x;
    const double t1 = 1.0 + unit(rng);
    const double t2 = t1 * (1.0 + 3.0 * unit(rng));
    const auto r = check_wedge_bounds(u, v, t1, t2, opt.wedge_samples, rng);
    ok_joint = ok_joint && r.joint_ok;
    ok_norm = ok_norm && r.norm_tail_ok;
    worst_joint = std::min(worst_joint, r.joint_estimate - (r.joint_bound - 3.0 * r.joint_sigma));
    if (r.joint_count > 0) {
      ++informative;
      const double m = 0.5 + 3.0 * r.norm_tail_sigma - r.norm_tail_estimate;
      worst_norm = std::min(worst_norm, m);
      if (r.narrow_range) worst_norm_narrow = std::min(worst_norm_narrow, m);
    }
    if (r.narrow_range) {
      ++narrow;
      ok_norm_narrow = ok_norm_narrow && r.norm_tail_ok;
    }
  }
  auto fin = [](double w) { return std::isinf(w) ? 0.0 : w; };
  std::vector<CheckReport> out;
  out.push_back({"wedge-joint", opt.wedge_pairs, worst_joint, ok_joint,
                 "Monte-Carlo, " + std::to_string(opt.wedge_samples) + " samples/pair, 3 sigma"});
  out.push_back({"wedge-norm", opt.wedge_pairs, fin(worst_norm), ok_norm,
                 "t2 <= 4 t1; " + std::to_string(informative) + " pairs with joint hits"});
  out.push_back({"wedge-norm-narrow", narrow, fin(worst_norm_narrow), ok_norm_narrow, "t2 <= 2 t1 subset"});
  return out;
}

std::vector<CheckReport> verify_threshold_advantage(const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  for (int R : opt.profile_rs) {
    double worst = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (std::size_t k = 0; k < opt.profiles_per_r; ++k) {
      Rng rng = make_rng(opt.seed, stream::kProfile + static_cast<std::uint64_t>(R), k);
      const auto prof = sample_threshold_profile(R, rng);
      const auto b = check_threshold_advantage(prof, opt.ell);
      worst = std::min(worst, b.rhs - b.lhs);
      max_ratio = std::max(max_ratio, b.lhs / b.rhs);
    }
    out.push_back(finish("threshold-advantage-R" + std::to_string(R), opt.profiles_per_r, worst, 0.0,
                         "max lhs/rhs = " + format_real(max_ratio) +
                             ", ell=" + format_real(opt.ell)));
  }
  return out;
}

std::vector<CheckReport> verify_all(const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  out.push_back(verify_tail_sandwich(opt));
  out.push_back(verify_ln_p_bound(opt));
  out.push_back(verify_lower_change(opt));
  out.push_back(verify_upper_power(opt));
  out.push_back(verify_small_shift(opt));
  for (auto& r : verify_wedges(opt)) out.push_back(std::move(r));
  for (auto& r : verify_threshold_advantage(opt)) out.push_back(std::move(r));
  return out;
}

std::string format_report(const CheckReport& r) {
  std::ostringstream os;
  os << r.id << " grid=" << r.grid << " min_margin=" << format_real(r.min_margin) << ' '
     << (r.pass ? "PASS" : "FAIL");
  if (!r.note.empty()) os << " (" << r.note << ')';
  return os.str();
}

}  // namespace max2csp::gaussian
