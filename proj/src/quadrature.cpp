#include "annex/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "annex/errors.hpp"

namespace annex {

namespace {

constexpr std::size_t kOrder = 10;
constexpr int kMaxDepth = 40;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev guesses.
Rule make_rule() {
  Rule rule;
  for (std::size_t i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(kOrder) + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= kOrder; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(kOrder) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

struct Integrator {
  const std::function<double(double)>& f;
  double tol_density;  // allowed error per unit length
  std::size_t evaluations = 0;
  double error = 0;

  double panel(double a, double b) {
    const Rule& r = rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0;
    for (std::size_t i = 0; i < kOrder; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    evaluations += kOrder;
    return s * half;
  }

  double refine(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(a, m);
    const double right = panel(m, b);
    const double halves = left + right;
    const double diff = halves - whole;
    // Ratio of errors between successive halvings for an order-2k rule.
    constexpr double kRichardson = 1048575.0;  // 2^20 - 1
    if (std::abs(diff) <= tol_density * (b - a) || depth >= kMaxDepth) {
      error += std::abs(diff) / kRichardson;
      return halves + diff / kRichardson;
    }
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t initial_panels) {
  if (!(b > a)) return {0.0, 0.0, 0, b};
  if (initial_panels == 0) initial_panels = 1;

  Integrator probe{f, 0.0};
  const double width = (b - a) / static_cast<double>(initial_panels);
  std::vector<double> coarse(initial_panels);
  double estimate = 0;
  for (std::size_t i = 0; i < initial_panels; ++i) {
    coarse[i] = probe.panel(a + width * i, a + width * (i + 1));
    estimate += coarse[i];
  }

  const double tol = std::max(abs_tol, rel_tol * std::abs(estimate));
  Integrator integ{f, tol / (b - a)};
  integ.evaluations = probe.evaluations;
  double total = 0;
  for (std::size_t i = 0; i < initial_panels; ++i) {
    total += integ.refine(a + width * i, a + width * (i + 1), coarse[i], 0);
  }
  return {total, integ.error, integ.evaluations, b};
}

QuadratureResult integrate_decaying(const std::function<double(double)>& f, double rel_tol,
                                    double tail_threshold) {
  double x_max = 1.0;
  std::size_t scans = 0;
  while (f(x_max) >= tail_threshold) {
    x_max *= 2.0;
    ++scans;
    if (x_max > 1e9) throw DomainError("integrand does not decay below the tail threshold");
  }
  auto res = integrate_adaptive(f, 0.0, x_max, rel_tol, 0.0, 32);
  res.evaluations += scans + 1;
  res.upper_limit = x_max;
  return res;
}

}  // namespace annex
