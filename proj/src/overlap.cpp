#include <cmath>

#include "annex/analysis.hpp"
#include "annex/errors.hpp"

namespace annex {

double omega(const CodeParams& params, std::size_t s) {
  const std::size_t n = params.n();
  if (s >= n) throw ParameterError("omega: s must be in [0, n-1]");
  if (s == 0 || n < 2) return 0.0;
  const double h = static_cast<double>(params.h);
  const double g = static_cast<double>(params.g());
  const double pi = static_cast<double>(params.l) / (static_cast<double>(n - 1) * h);
  const double keep = std::pow(1.0 - pi, static_cast<double>(s));
  return g * (1.0 - keep) + static_cast<double>(s) * h * pi * keep;
}

std::vector<double> omega_profile(const CodeParams& params) {
  std::vector<double> out(params.n());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = omega(params, s);
  return out;
}

double omega_asymptotic(double h, double alpha, double beta) {
  if (alpha < 0) throw DomainError("omega_asymptotic: alpha must be nonnegative");
  if (beta < 0 || beta > 1) throw DomainError("omega_asymptotic: beta must lie in [0, 1]");
  const double e = std::exp(-alpha * beta);
  return h * ((1.0 + alpha) * (1.0 - e) + alpha * beta * e);
}

std::vector<double> layout_overlap_profile(const GenerationLayout& layout) {
  const std::size_t n = layout.generation_count();
  // A member p of G_j with degree d lies in the union of a uniform s-subset
  // of the other n-1 generations unless the subset avoids all d-1 others:
  // P(miss) = C(n-d, s) / C(n-1, s).
  std::vector<std::size_t> weight_by_degree(n + 1, 0);
  for (PacketIndex p = 0; p < layout.packet_count(); ++p) {
    const std::size_t d = layout.degree(p);
    weight_by_degree[d] += d;
  }
  std::vector<double> profile(n, 0.0);
  for (std::size_t d = 2; d <= n; ++d) {
    if (weight_by_degree[d] == 0) continue;
    double miss = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
      profile[s] += static_cast<double>(weight_by_degree[d]) * (1.0 - miss);
      // C(n-d, s+1)/C(n-1, s+1) = miss * (n-d-s)/(n-1-s)
      if (s + 1 < n) {
        miss = (n - d >= s + 1)
                   ? miss * static_cast<double>(n - d - s) / static_cast<double>(n - 1 - s)
                   : 0.0;
      }
    }
  }
  for (auto& v : profile) v /= static_cast<double>(n);
  return profile;
}

double eta(double g, double x, double q) {
  if (q < 2) throw DomainError("eta: q must be at least 2");
  if (x >= g) return 0.0;
  const double r = g - x;
  const double qi = 1.0 / q;
  const double v = r + qi / (1.0 - qi) + std::log((1.0 - std::pow(q, -r)) / (1.0 - qi)) / std::log(q);
  return r < 1.0 ? std::max(0.0, v) : v;
}

double eta_exact(std::size_t g, std::size_t x, double q) {
  if (q < 2) throw DomainError("eta_exact: q must be at least 2");
  if (x >= g) return 0.0;
  const std::size_t r = g - x;
  double sum = 0;
  for (std::size_t j = 0; j < r; ++j) {
    sum += 1.0 / (1.0 - std::pow(q, static_cast<double>(j) - static_cast<double>(r)));
  }
  return sum;
}

}  // namespace annex
