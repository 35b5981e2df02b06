#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "max2csp/random.hpp"

namespace max2csp::gaussian {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double density(double t);

/// Upper tail p(t) = Pr[N > t] of a standard normal, via erfc.
double tail(double t);

/// Inverse of tail(): the t with tail(t) = p. Rational initial guess followed
/// by Halley steps on tail(t) - p. Throws std::domain_error unless 0 < p < 1.
double inv_tail(double p);

/// Closed-form Mills-ratio sandwich around tail(t) for t > 0:
///   t / (sqrt(2 pi) (t^2 + 1)) e^{-t^2/2}  <=  p(t)  <=  e^{-t^2/2} / (sqrt(2 pi) t).
/// `upper` is capped at 1.
struct TailBounds {
  double lower = 0.0;
  double upper = 1.0;
};
TailBounds tail_bounds(double t);

/// dim independent standard normal draws. Throws std::invalid_argument if dim == 0.
std::vector<double> sample_gaussian_vector(std::size_t dim, Rng& rng);
void fill_gaussian(std::span<double> out, Rng& rng);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);

}  // namespace max2csp::gaussian
