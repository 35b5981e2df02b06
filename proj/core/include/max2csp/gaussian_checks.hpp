#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "max2csp/gaussian.hpp"

namespace max2csp::gaussian {

// Numerical checks of the Gaussian-tail inequalities behind the shortlist
// rounding analysis. Every check returns a margin that is nonnegative when
// the inequality holds; the verifiers sweep grids or Monte-Carlo samples and
// report the worst margin.

/// Threshold above which the "t large enough" inequalities are checked.
/// Every grid point on [2, 8] passes at this value.
inline constexpr double kLargeT = 2.0;

/// Explicit constant for the small-shift bound: for alpha <= 1/t^2,
/// p((1 - alpha) t) <= p(t)^{1 - 3 alpha} <= e^3 p(t), using ln(1/p) <= t^2.
inline constexpr double kSmallShiftConstant = 20.085536923187668;  // e^3

/// Constant standing in for the O(.) of the threshold-advantage bound.
/// tools/calibrate_threshold_advantage.py measures sup lhs / bracket = 1.013
/// (1.4M random plus adversarial profiles, R = 4..256, ell = 0.1); 2 leaves
/// about a factor of two.
inline constexpr double kThresholdAdvantageConstant = 2.0;

/// (ln(1/p(t)) - t^2/2, t^2 - ln(1/p(t))).
struct LnPMargins {
  double lower = 0.0;
  double upper = 0.0;
};
LnPMargins check_ln_p_bound(double t);

/// A threshold t > 0 lowered by the factor (1 - alpha), alpha in [0, 1].
struct ChangeBoundProbe {
  double t = kLargeT;
  double alpha = 0.0;
};

/// p((1 - alpha) t) - alpha p(t) ln(1/p(t)).
double check_lower_change(const ChangeBoundProbe& probe);

/// p(t)^{1 - 3 alpha} - p((1 - alpha) t).
double check_upper_power(const ChangeBoundProbe& probe);

/// kSmallShiftConstant * p(t) - p((1 - alpha) t); requires alpha <= 1/t^2.
double check_small_shift(const ChangeBoundProbe& probe);

/// Thresholds t_b with advantages s_b >= 0.
struct ThresholdProfile {
  std::vector<double> thresholds;
  std::vector<double> advantages;

  double advantage_sq() const;
  double t_min() const;
  double t_max() const;
  double tail_sum() const;
};

struct AdvantageBound {
  double lhs = 0.0;  ///< sum_b p(t_b - s_b)
  double rhs = 0.0;  ///< C (1 + s^2/t_min^2 (1/ell + p(t_min) t_max^4 / p(t_max)^{3 ell}))
};

/// Evaluates both sides of the threshold-advantage bound. The additive 1
/// inside the bracket covers the unshifted mass sum_b p(t_b) <= 1, which
/// the bound needs when s is small. Throws std::invalid_argument if
/// sum_b p(t_b) > 1 (plus 1e-12 slack), a threshold is not positive, an
/// advantage is negative, sizes differ, or ell is outside (0, 1).
AdvantageBound check_threshold_advantage(const ThresholdProfile& profile, double ell,
                                         double constant = kThresholdAdvantageConstant);

/// Random profile shaped like a rounding instance with domain size R:
/// thresholds come from p_b = (r_b / sqrt(R) + 1/R) / 2 for a random
/// unit-mass norm vector r (then raised to at least sqrt(ln R)/2), and
/// advantages have s^2 <= 400 ln R.
ThresholdProfile sample_threshold_profile(int R, Rng& rng);

/// Monte-Carlo estimates for two unit vectors with nonnegative inner product.
struct WedgeReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double inner = 0.0;
  std::size_t samples = 0;
  // Joint exceedance Pr[<g,u> > t1 and <g,v> > t2] vs p(t1) p(t2).
  double joint_estimate = 0.0;
  double joint_bound = 0.0;
  double joint_sigma = 0.0;
  bool joint_ok = false;
  // Pr[|g_par| > 10 t1 | both exceed], g_par the projection onto span{u, v}.
  std::size_t joint_count = 0;
  double norm_tail_estimate = 0.0;
  double norm_tail_sigma = 0.0;
  bool norm_tail_ok = false;
  bool narrow_range = false;  ///< t2 <= 2 t1
};

/// Requires t1 >= 1 and t1 <= t2 <= 4 t1. Throws std::invalid_argument for
/// non-unit vectors, mismatched sizes or a negative inner product.
WedgeReport check_wedge_bounds(std::span<const double> u, std::span<const double> v, double t1,
                               double t2, std::size_t samples, Rng& rng);

/// One verifier line: check id, number of evaluated points, worst margin.
struct CheckReport {
  std::string id;
  std::size_t grid = 0;
  double min_margin = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  double t_lo = kLargeT;
  double t_hi = 8.0;
  double t_step = 0.01;
  double alpha_step = 0.02;
  double sandwich_t_lo = 0.5;
  double slack = 1e-12;
  std::size_t wedge_pairs = 50;
  std::size_t wedge_samples = 200000;
  std::size_t wedge_dim = 3;
  std::size_t profiles_per_r = 1000;
  std::vector<int> profile_rs = {8, 16, 64};
  double ell = 0.1;
  std::uint64_t seed = 1;
};

CheckReport verify_tail_sandwich(const VerifyOptions& opt);
CheckReport verify_ln_p_bound(const VerifyOptions& opt);
CheckReport verify_lower_change(const VerifyOptions& opt);
CheckReport verify_upper_power(const VerifyOptions& opt);
CheckReport verify_small_shift(const VerifyOptions& opt);
/// Joint-exceedance lower bound, then the conditional norm bound on the
/// t2 <= 4 t1 range and on its t2 <= 2 t1 subset.
std::vector<CheckReport> verify_wedges(const VerifyOptions& opt);
std::vector<CheckReport> verify_threshold_advantage(const VerifyOptions& opt);

/// All of the above, in a fixed order.
std::vector<CheckReport> verify_all(const VerifyOptions& opt);

/// "<id> grid=<n> min_margin=<x> PASS|FAIL[ (note)]"
std::string format_report(const CheckReport& r);

/// Evenly spaced points lo, lo + step, ..., hi (inclusive, rounded count).
std::vector<double> grid(double lo, double hi, double step);

}  // namespace max2csp::gaussian
