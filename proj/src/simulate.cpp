#include "annex/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "annex/errors.hpp"
#include "annex/rng.hpp"

namespace annex {

namespace {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

MeanEstimate summarize(std::vector<std::size_t> samples, std::uint64_t seed) {
  MeanEstimate est;
  est.trials = samples.size();
  est.seed = seed;
  if (samples.empty()) return est;
  double sum = 0;
  for (auto v : samples) sum += static_cast<double>(v);
  est.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0;
    for (auto v : samples) ss += (static_cast<double>(v) - est.mean) * (static_cast<double>(v) - est.mean);
    est.std_dev = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    est.std_error = est.std_dev / std::sqrt(static_cast<double>(samples.size()));
  }
  est.samples = std::move(samples);
  return est;
}

}  // namespace

TrialResult run_trial(const GenerationLayout& layout, const GaloisField& field, std::uint64_t seed,
                      const TrialOptions& options) {
  Rng rng(seed);
  const std::size_t N = layout.packet_count();
  const std::size_t n = layout.generation_count();
  const auto source = random_packets(field, N, options.d, rng);

  Decoder decoder(layout, field, options.d, DecoderOptions{options.cascade});
  TrialResult result;
  result.decoded_generations_timeline.reserve(n);
  const std::size_t cap = options.cap_factor * N;
  std::size_t sent = 0;
  while (!decoder.is_complete()) {
    if (sent >= cap) {
      throw std::runtime_error("trial did not complete within " + std::to_string(cap) +
                               " coded packets (" + std::to_string(decoder.resolved_count()) +
                               "/" + std::to_string(N) + " resolved)");
    }
    const auto j = static_cast<GenerationIndex>(uniform_index(rng, n));
    auto cp = encode(layout, field, source, j, rng);
    const auto report = decoder.ingest(cp);
    ++sent;
    for (std::size_t k = 0; k < report.newly_decoded_generations; ++k) {
      result.decoded_generations_timeline.push_back(sent);
    }
    if (options.record_trace) result.trace.push_back(std::move(cp));
  }

  for (PacketIndex p = 0; p < N; ++p) {
    const auto v = decoder.value(p);
    if (!std::equal(v.begin(), v.end(), source[p].begin(), source[p].end())) {
      throw SoundnessError("decoded packet " + std::to_string(p) + " differs from the source");
    }
  }

  result.packets_to_completion = sent;
  result.per_generation_received.resize(n);
  for (GenerationIndex i = 0; i < n; ++i) result.per_generation_received[i] = decoder.received(i);
  result.non_innovative = decoder.telemetry().non_innovative;
  result.max_solve_dimension = decoder.telemetry().max_solve_dimension;
  return result;
}

TrialResult run_ensemble_trial(Scheme scheme, const CodeParams& params, const GaloisField& field,
                               std::uint64_t master_seed, std::size_t trial,
                               const TrialOptions& options) {
  const std::uint64_t trial_seed = derive_seed(master_seed, trial);
  const auto layout = make_layout(scheme, params, derive_seed(trial_seed, 0));
  return run_trial(layout, field, derive_seed(trial_seed, 1), options);
}

MeanEstimate estimate_mean(Scheme scheme, const CodeParams& params, std::size_t trials,
                           std::uint64_t seed, const TrialOptions& options, unsigned threads) {
  if (trials == 0) throw ParameterError("estimate_mean: trials must be positive");
  params.validate();
  const auto field = GaloisField::with_size(params.q);
  TrialOptions opts = options;
  opts.record_trace = false;
  std::vector<std::size_t> samples(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    samples[i] = run_ensemble_trial(scheme, params, field, seed, i, opts).packets_to_completion;
  });
  return summarize(std::move(samples), seed);
}

FailureCurve failure_curve_from_samples(std::span<const std::size_t> grid,
                                        std::span<const std::size_t> packets_to_completion,
                                        std::uint64_t seed) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("failure grid must be sorted");
  FailureCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.trials = packets_to_completion.size();
  curve.seed = seed;
  std::vector<std::size_t> sorted(packets_to_completion.begin(), packets_to_completion.end());
  std::sort(sorted.begin(), sorted.end());
  for (const std::size_t M : grid) {
    // incomplete after M packets <=> completion needed more than M
    const auto done = std::upper_bound(sorted.begin(), sorted.end(), M) - sorted.begin();
    const double failures = static_cast<double>(sorted.size()) - static_cast<double>(done);
    curve.p_fail.push_back(sorted.empty() ? 1.0 : failures / static_cast<double>(sorted.size()));
  }
  return curve;
}

FailureCurve failure_curve(Scheme scheme, const CodeParams& params,
                           std::span<const std::size_t> grid, std::size_t trials,
                           std::uint64_t seed, unsigned threads) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("failure grid must be sorted");
  const auto est = estimate_mean(scheme, params, trials, seed, {}, threads);
  return failure_curve_from_samples(grid, est.samples, seed);
}

FailureCurve failure_curve(const GenerationLayout& layout, std::span<const std::size_t> grid,
                           std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("failure grid must be sorted");
  if (trials == 0) throw ParameterError("failure_curve: trials must be positive");
  const auto field = GaloisField::with_size(layout.params().q);
  std::vector<std::size_t> samples(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    samples[i] = run_trial(layout, field, derive_seed(seed, i)).packets_to_completion;
  });
  return failure_curve_from_samples(grid, samples, seed);
}

OverlapEstimate empirical_overlap(const CodeParams& params, std::size_t s, std::size_t samples,
                                  std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.n();
  if (s >= n) throw ParameterError("empirical_overlap: s must be in [0, n-1]");
  if (samples == 0) throw ParameterError("empirical_overlap: samples must be positive");

  Rng rng(seed);
  std::vector<std::uint32_t> stamp(params.N, 0);
  std::vector<GenerationIndex> order(n);
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    const auto mark = static_cast<std::uint32_t>(t + 1);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<GenerationIndex>(i);
    for (std::size_t i = 0; i <= s; ++i) {
      std::swap(order[i], order[i + uniform_index(rng, n - i)]);
    }
    auto members_of = [&](GenerationIndex gen) {
      const auto b0 = static_cast<PacketIndex>(gen * params.h);
      const std::size_t bs = std::min(params.h, params.N - b0);
      auto annex = sample_annex(rng, params.N, b0, bs, params.l);
      for (std::size_t k = 0; k < bs; ++k) annex.push_back(static_cast<PacketIndex>(b0 + k));
      return annex;
    };
    for (std::size_t i = 0; i < s; ++i) {
      for (const PacketIndex p : members_of(order[i])) stamp[p] = mark;
    }
    std::size_t overlap = 0;
    for (const PacketIndex p : members_of(order[s])) overlap += stamp[p] == mark ? 1 : 0;
    sum += static_cast<double>(overlap);
    sum_sq += static_cast<double>(overlap) * static_cast<double>(overlap);
  }
  OverlapEstimate est;
  est.samples = samples;
  est.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var = (sum_sq - static_cast<double>(samples) * est.mean * est.mean) /
                       static_cast<double>(samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  }
  return est;
}

}  // namespace annex
