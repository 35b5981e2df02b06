#include "max2csp/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace max2csp::gaussian {

double density(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

namespace {

// Lower-quantile rational approximation (P. J. Acklam), relative error
// about 1e-9; used only as the starting point for refinement.
double normal_quantile_guess(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double inv_tail(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inv_tail: probability must lie in (0, 1), got " + std::to_string(p));
  if (p == 0.5) return 0.0;
  // Upper tail p corresponds to lower quantile 1 - p; the guess is symmetric.
  double t = -normal_quantile_guess(p);
  for (int iter = 0; iter < 3; ++iter) {
    const double phi = density(t);
    if (phi == 0.0) break;
    const double r = (tail(t) - p) / phi;
    t += r / (1.0 - 0.5 * t * r);
  }
  return t;
}

TailBounds tail_bounds(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("tail_bounds: t must be positive");
  const double e = std::exp(-0.5 * t * t);
  TailBounds out;
  out.lower = t / (t * t + 1.0) * kInvSqrt2Pi * e;
  out.upper = std::min(1.0, kInvSqrt2Pi * e / t);
  return out;
}

std::vector<double> sample_gaussian_vector(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("sample_gaussian_vector: dim must be >= 1");
  std::vector<double> g(dim);
  fill_gaussian(g, rng);
  return g;
}

void fill_gaussian(std::span<double> out, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : out) x = normal(rng);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace max2csp::gaussian
