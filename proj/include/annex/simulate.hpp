#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "annex/codec.hpp"
#include "annex/gfield.hpp"
#include "annex/layout.hpp"

namespace annex {

struct TrialOptions {
  std::size_t d = 1;             // payload symbols; does not affect packet counts
  bool cascade = true;
  std::size_t cap_factor = 50;   // abort after cap_factor * N ingests
  bool record_trace = false;
};

struct TrialResult {
  std::size_t packets_to_completion = 0;
  /// Entry s-1: coded packets received when the s-th generation became fully resolved.
  std::vector<std::size_t> decoded_generations_timeline;
  std::vector<std::size_t> per_generation_received;
  std::size_t non_innovative = 0;
  std::size_t max_solve_dimension = 0;
  std::vector<CodedPacket> trace;
};

/// One unicast collection: uniformly random generation per transmission,
/// fresh uniform coding vector, ingest until all N packets are resolved.
/// The recovered packets are compared with the source; a mismatch throws
/// SoundnessError. Exceeding the ingest cap throws std::runtime_error.
TrialResult run_trial(const GenerationLayout& layout, const GaloisField& field,
                      std::uint64_t seed, const TrialOptions& options = {});

/// Trial i of an ensemble: a fresh layout for the scheme (random annex layouts
/// differ per trial) and independent coding randomness, both derived from
/// derive_seed(master_seed, i).
TrialResult run_ensemble_trial(Scheme scheme, const CodeParams& params,
                               const GaloisField& field, std::uint64_t master_seed,
                               std::size_t trial, const TrialOptions& options = {});

struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
  double std_dev = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> samples;  // packets_to_completion per trial, in trial order
};

/// Runs `trials` ensemble trials, spread over `threads` workers (0: hardware
/// concurrency). Results do not depend on the thread count.
MeanEstimate estimate_mean(Scheme scheme, const CodeParams& params, std::size_t trials,
                           std::uint64_t seed, const TrialOptions& options = {},
                           unsigned threads = 0);

struct FailureCurve {
  std::vector<std::size_t> grid;
  std::vector<double> p_fail;  // fraction of trials still incomplete after M packets
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

FailureCurve failure_curve_from_samples(std::span<const std::size_t> grid,
                                        std::span<const std::size_t> packets_to_completion,
                                        std::uint64_t seed);

/// Failure curve over the code ensemble (fresh layout per trial).
FailureCurve failure_curve(Scheme scheme, const CodeParams& params,
                           std::span<const std::size_t> grid, std::size_t trials,
                           std::uint64_t seed, unsigned threads = 0);

/// Failure curve for one fixed layout.
FailureCurve failure_curve(const GenerationLayout& layout, std::span<const std::size_t> grid,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 0);

struct OverlapEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

/// Mean of |(U_{i in I} G_i) & G_j| over fresh random annex draws, with I a
/// uniform s-subset of generations and j uniform outside I. Only the s+1
/// generations involved are drawn for each sample.
OverlapEstimate empirical_overlap(const CodeParams& params, std::size_t s, std::size_t samples,
                                  std::uint64_t seed);

}  // namespace annex
