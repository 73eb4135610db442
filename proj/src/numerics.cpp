#include "mrt/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "mrt/errors.hpp"

namespace mrt::numerics {

double bisect_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  if (fa == 0.0) return a;
  const double fb = f(b);
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) {
    throw std::invalid_argument("bisect_root: interval does not bracket a root");
  }
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= std::fmin(a, b) || m >= std::fmax(a, b)) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  // Return the endpoint with the smaller residual.
  return std::fabs(f(a)) <= std::fabs(f(b)) ? a : b;
}

GoldenResult golden_section_minimize(const std::function<double(double)>& f,
                                     double a, double b, double tol,
                                     int max_evaluations) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  if (a > b) std::swap(a, b);
  GoldenResult r;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  r.evaluations = 2;
  while (b - a > tol && r.evaluations < max_evaluations) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      if (!(c > a && c < d)) break;  // bracket below floating resolution
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      if (!(d > c && d < b)) break;
      fd = f(d);
    }
    ++r.evaluations;
  }
  r.converged = (b - a) <= tol;
  r.lo = a;
  r.hi = b;
  if (fc < fd) {
    r.x = c;
    r.fx = fc;
  } else {
    r.x = d;
    r.fx = fd;
  }
  return r;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs at least two (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double x_ln_x(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace mrt::numerics
