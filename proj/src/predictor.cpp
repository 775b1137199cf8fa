#include <cmath>
#include <string>

#include "annex/analysis.hpp"
#include "annex/errors.hpp"

namespace annex {

std::vector<std::size_t> step_requirements(const CodeParams& params,
                                           std::span<const double> omega) {
  const double g = static_cast<double>(params.g());
  const double q = static_cast<double>(params.q);
  std::vector<std::size_t> out(omega.size());
  for (std::size_t s = 0; s < omega.size(); ++s) {
    // Nudge so that an analytically integral eta is not ceilinged up by rounding noise.
    const double v = std::ceil(eta(g, omega[s], q) - 1e-9);
    out[s] = v <= 0 ? 0 : static_cast<std::size_t>(v);
    if (s > 0 && out[s] > out[s - 1]) {
      throw ParameterError("requirement increased at step " + std::to_string(s + 1) +
                           "; overlap profile must be nondecreasing");
    }
  }
  return out;
}

Prediction predict_from_profile(const CodeParams& params, std::vector<double> omega,
                                const CollectionOptions& options) {
  params.validate();
  const std::size_t n = params.n();
  if (omega.size() != n) throw ParameterError("overlap profile must have n entries");
  Prediction p;
  p.omega = std::move(omega);
  p.requirements = step_requirements(params, p.omega);
  p.profile = condense(p.requirements);
  p.expected_packets = expected_collection(n, p.profile, options);
  p.uniform_generation_size = params.divisible();
  return p;
}

Prediction predict(const CodeParams& params, const CollectionOptions& options) {
  params.validate();
  return predict_from_profile(params, omega_profile(params), options);
}

double predict_expected_packets(const CodeParams& params) { return predict(params).expected_packets; }

}  // namespace annex
