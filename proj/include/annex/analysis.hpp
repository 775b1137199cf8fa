#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "annex/layout.hpp"

namespace annex {

// ---------------------------------------------------------------------------
// Overlap structure of the random annex code

/// Expected overlap between the union of s generations and one more
/// generation: g(1 - pibar^s) + s h pi pibar^s with pi = l / ((n-1)h).
double omega(const CodeParams& params, std::size_t s);

/// omega(params, s) for s = 0..n-1.
std::vector<double> omega_profile(const CodeParams& params);

/// Large-n limit of omega with l/h -> alpha and s/n -> beta.
double omega_asymptotic(double h, double alpha, double beta);

/// Overlap profile of one concrete layout: E|(U_{i in I} G_i) & G_j| with the
/// decode order (I of size s, then j) uniformly random, s = 0..n-1. Exact.
std::vector<double> layout_overlap_profile(const GenerationLayout& layout);

// ---------------------------------------------------------------------------
// Coded packets needed by one generation

/// Closed-form upper estimate of the coded packets generation of size g
/// needs once x of its members are resolved. Real x; 0 for x >= g and
/// floored at 0 on (g-1, g).
double eta(double g, double x, double q);

/// Exact expectation sum_{j<g-x} 1/(1 - q^{j-(g-x)}); 0 for x >= g.
double eta_exact(std::size_t g, std::size_t x, double q);

// ---------------------------------------------------------------------------
// Poissonization kernel

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// S_m(x) = sum_{i<m} x^i / i!, S_0 = 0, S_kUnbounded = e^x. Throws DomainError for x < 0.
double partial_exp_sum(std::size_t m, double x);

/// (S_hi(x) - S_lo(x)) e^{-x} = P(lo <= Poisson(x) < hi), hi >= lo, hi may be
/// kUnbounded. Summed from pmf terms; no e^x is formed.
double poisson_band(std::size_t hi, std::size_t lo, double x);

// ---------------------------------------------------------------------------
// Collector's brotherhood expectation

/// Requirement levels: at least k[j] generations must hold m[j] or more coded
/// packets, for every j. k strictly increasing in [1, n], m strictly
/// decreasing and positive.
struct CollectorProfile {
  std::vector<std::size_t> k;
  std::vector<std::size_t> m;

  std::size_t A() const { return m.size(); }
  /// Throws ParameterError when the constraints above fail.
  void validate(std::size_t n) const;

  friend bool operator==(const CollectorProfile&, const CollectorProfile&) = default;
};

/// Groups a nonincreasing per-step requirement list into levels; trailing
/// zeros are dropped. Throws ParameterError on an increasing step.
CollectorProfile condense(std::span<const std::size_t> m_prime);

/// 1 - phi_{A,n}(x): probability that the requirements are not all met when
/// every generation has received Poisson(x) packets. Evaluated with the
/// level-by-level recursion in O(A n^2). When `terms` is non-null it receives
/// the number of inner-loop terms evaluated.
double collection_integrand(std::size_t n, const CollectorProfile& profile, double x,
                            std::size_t* terms = nullptr);

struct CollectionOptions {
  double rel_tol = 1e-8;
};

/// Expected number of coded packets until every requirement level holds:
/// n * int_0^inf (1 - phi_{A,n}(x)) dx.
double expected_collection(std::size_t n, const CollectorProfile& profile,
                           const CollectionOptions& options = {});

// ---------------------------------------------------------------------------
// Mean-value throughput predictor

struct Prediction {
  std::vector<double> omega;              // overlap before the s-th decoding, s = 1..n
  std::vector<std::size_t> requirements;  // m'_s
  CollectorProfile profile;
  double expected_packets = 0;
  bool uniform_generation_size = true;    // false when N is not a multiple of h
};

/// m'_s = ceil(eta(omega[s-1])) with a 1e-9 downward nudge before the ceiling.
std::vector<std::size_t> step_requirements(const CodeParams& params,
                                           std::span<const double> omega);

/// Prediction from an arbitrary overlap profile (length n, omega[0] = 0).
Prediction predict_from_profile(const CodeParams& params, std::vector<double> omega,
                                const CollectionOptions& options = {});

/// Random annex prediction with the closed-form overlap profile.
Prediction predict(const CodeParams& params, const CollectionOptions& options = {});

double predict_expected_packets(const CodeParams& params);

}  // namespace annex
