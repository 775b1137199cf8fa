#pragma once

#include <cstddef>
#include <functional>

namespace annex {

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  std::size_t evaluations = 0;
  double upper_limit = 0;  // truncation point for integrals over [0, inf)
};

/// Adaptive bisection over 10-point Gauss-Legendre panels. A panel is
/// accepted when its two halves agree with it to within its share of
/// max(abs_tol, rel_tol * |I|); the accepted value carries the Richardson
/// correction.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol = 0.0,
                                    std::size_t initial_panels = 16);

/// Integral over [0, inf) of a nonnegative, nonincreasing f. The range is
/// truncated at the first x = 2^k with f(x) < tail_threshold.
QuadratureResult integrate_decaying(const std::function<double(double)>& f, double rel_tol,
                                    double tail_threshold = 1e-12);

}  // namespace annex
