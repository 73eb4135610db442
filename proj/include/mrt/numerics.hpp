#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace mrt::numerics {

/// Bisection on a bracketing interval, run until the midpoint can no longer
/// be distinguished from an endpoint. Requires f(a) and f(b) of opposite sign
/// (or one of them zero).
double bisect_root(const std::function<double(double)>& f, double a, double b);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Golden-section search for the minimum of a unimodal f on [a, b]; stops
/// when the bracket is narrower than tol. One new evaluation per iteration.
GoldenResult golden_section_minimize(const std::function<double(double)>& f,
                                     double a, double b, double tol,
                                     int max_evaluations = 200);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares. x is centered internally.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// ln(x^x) with ln(0^0) = 0.
double x_ln_x(double x);

}  // namespace mrt::numerics
