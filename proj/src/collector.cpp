#include <algorithm>
#include <cmath>
#include <string>

#include "annex/analysis.hpp"
#include "annex/errors.hpp"
#include "annex/quadrature.hpp"

namespace annex {

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0)) throw DomainError("Poissonization argument must be nonnegative");
}

// Poisson(x) pmf for i = 0..count-1, started at the mode (or the last index)
// in log space and extended by the ratio recurrences.
std::vector<double> poisson_pmf(double x, std::size_t count) {
  std::vector<double> t(count, 0.0);
  if (count == 0) return t;
  if (x == 0) {
    t[0] = 1.0;
    return t;
  }
  const std::size_t start = std::min(static_cast<std::size_t>(x), count - 1);
  const double s = static_cast<double>(start);
  t[start] = std::exp(-x + s * std::log(x) - std::lgamma(s + 1.0));
  for (std::size_t i = start; i > 0; --i) t[i - 1] = t[i] * static_cast<double>(i) / x;
  for (std::size_t i = start + 1; i < count; ++i) t[i] = t[i - 1] * x / static_cast<double>(i);
  return t;
}

// P(Poisson(x) >= m) given pmf terms below m.
double upper_tail(double x, std::size_t m, const std::vector<double>& pmf) {
  if (m == 0) return 1.0;
  const double mm = static_cast<double>(m);
  if (x >= mm) {
    double below = 0;
    for (std::size_t i = 0; i < m; ++i) below += pmf[i];
    return std::max(0.0, 1.0 - below);
  }
  // Terms decrease past the mode: sum them directly.
  double term = (x == 0) ? 0.0 : std::exp(-x + mm * std::log(x) - std::lgamma(mm + 1.0));
  double sum = 0;
  for (std::size_t i = m; term > 0; ++i) {
    sum += term;
    if (term < 1e-18 * sum) break;
    term *= x / static_cast<double>(i + 1);
  }
  return std::min(1.0, sum);
}

}  // namespace

double partial_exp_sum(std::size_t m, double x) {
  require_nonnegative(x);
  if (m == kUnbounded) return std::exp(x);
  double term = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += term;
    term *= x / static_cast<double>(i + 1);
  }
  return sum;
}

double poisson_band(std::size_t hi, std::size_t lo, double x) {
  require_nonnegative(x);
  if (hi < lo) throw ParameterError("poisson_band: hi must be >= lo");
  if (hi == lo) return 0.0;
  if (hi == kUnbounded) {
    const auto pmf = poisson_pmf(x, lo);
    return upper_tail(x, lo, pmf);
  }
  const auto pmf = poisson_pmf(x, hi);
  double sum = 0;
  for (std::size_t i = lo; i < hi; ++i) sum += pmf[i];
  return std::min(1.0, sum);
}

void CollectorProfile::validate(std::size_t n) const {
  if (k.size() != m.size()) throw ParameterError("profile: k and m differ in length");
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (k[j] < 1 || k[j] > n) {
      throw ParameterError("profile: k_" + std::to_string(j + 1) + " must lie in [1, n]");
    }
    if (j > 0 && k[j] <= k[j - 1]) throw ParameterError("profile: k must be strictly increasing");
    if (m[j] == 0) throw ParameterError("profile: requirements must be positive");
    if (j > 0 && m[j] >= m[j - 1]) throw ParameterError("profile: m must be strictly decreasing");
  }
}

CollectorProfile condense(std::span<const std::size_t> m_prime) {
  CollectorProfile profile;
  for (std::size_t s = 0; s < m_prime.size(); ++s) {
    if (s > 0 && m_prime[s] > m_prime[s - 1]) {
      throw ParameterError("condense: requirements must be nonincreasing (step " +
                           std::to_string(s + 1) + ")");
    }
    if (m_prime[s] == 0) continue;
    if (profile.m.empty() || profile.m.back() != m_prime[s]) {
      profile.m.push_back(m_prime[s]);
      profile.k.push_back(s + 1);
    } else {
      profile.k.back() = s + 1;
    }
  }
  return profile;
}

double collection_integrand(std::size_t n, const CollectorProfile& profile, double x,
                            std::size_t* terms) {
  require_nonnegative(x);
  const std::size_t A = profile.A();
  if (terms) *terms = 0;
  if (A == 0) return 0.0;

  // band[j] = P(m_{j+1} <= Pois(x) < m_j), m_0 = inf, m_{A+1} = 0.
  const auto pmf = poisson_pmf(x, profile.m.front());
  std::vector<double> band(A + 1, 0.0);
  band[0] = upper_tail(x, profile.m.front(), pmf);
  for (std::size_t j = 1; j <= A; ++j) {
    const std::size_t hi = profile.m[j - 1];
    const std::size_t lo = j < A ? profile.m[j] : 0;
    double sum = 0;
    for (std::size_t i = lo; i < hi; ++i) sum += pmf[i];
    band[j] = sum;
  }

  // phi[w] for the current level, indexed by w in [0, n].
  std::vector<double> phi(n + 1, 0.0);
  std::vector<double> next(n + 1, 0.0);
  {
    double p = 1.0;
    for (std::size_t w = 0; w <= n; ++w) {
      if (w >= profile.k[0]) phi[w] = p;
      p *= band[0];
    }
  }

  const bool log_domain = n > 1000;  // C(k, w) p^(k-w) can overflow past k ~ 1020
  std::size_t count = 0;
  for (std::size_t j = 1; j <= A; ++j) {
    const std::size_t kj = profile.k[j - 1];
    const std::size_t k_next = j < A ? profile.k[j] : n;
    const double p = band[j];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t k = k_next; k <= n; ++k) {
      double sum = 0;
      if (!log_domain) {
        // weight = C(k, w) p^(k-w), walked down from w = k.
        double weight = 1.0;
        for (std::size_t w = k;; --w) {
          sum += weight * phi[w];
          ++count;
          if (w == kj || weight == 0.0) break;
          weight *= p * static_cast<double>(w) / static_cast<double>(k - w + 1);
        }
      } else {
        const double lp = std::log(p);
        const double lk = std::lgamma(static_cast<double>(k) + 1.0);
        for (std::size_t w = kj; w <= k; ++w) {
          ++count;
          if (phi[w] <= 0.0) continue;
          if (p == 0.0 && w != k) continue;
          const double lw = std::lgamma(static_cast<double>(w) + 1.0) +
                            std::lgamma(static_cast<double>(k - w) + 1.0);
          const double lpow = (k == w) ? 0.0 : static_cast<double>(k - w) * lp;
          sum += std::exp(lk - lw + lpow + std::log(phi[w]));
        }
      }
      next[k] = sum;
    }
    std::swap(phi, next);
  }
  if (terms) *terms = count;

  const double value = 1.0 - phi[n];
  if (value < -1e-9 || value > 1.0 + 1e-9) {
    throw DomainError("collection integrand left [0, 1]: " + std::to_string(value));
  }
  return std::clamp(value, 0.0, 1.0);
}

double expected_collection(std::size_t n, const CollectorProfile& profile,
                           const CollectionOptions& options) {
  if (n == 0) throw ParameterError("expected_collection: n must be positive");
  profile.validate(n);
  if (profile.A() == 0) return 0.0;
  auto f = [&](double x) { return collection_integrand(n, profile, x); };
  const auto res = integrate_decaying(f, options.rel_tol);
  return static_cast<double>(n) * res.value;
}

}  // namespace annex
