#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annex/rng.hpp"

namespace annex {

using PacketIndex = std::uint32_t;
using GenerationIndex = std::uint32_t;

/// Code parameters. Packet and generation indices are 0-based throughout.
struct CodeParams {
  std::size_t N = 0;    // information packets
  std::size_t h = 0;    // base generation size
  std::size_t l = 0;    // annex size
  std::size_t d = 1;    // symbols per packet
  std::uint32_t q = 256;

  std::size_t n() const { return h == 0 ? 0 : (N + h - 1) / h; }
  std::size_t g() const { return h + l; }
  bool divisible() const { return h != 0 && N % h == 0; }

  /// Throws ParameterError unless 1 <= h <= N, l <= N - h, d >= 1 and q is a
  /// power of two in [2, 65536].
  void validate() const;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

enum class Scheme { kRandomAnnex, kHeadToToe, kDisjoint };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct Membership {
  GenerationIndex generation;
  std::uint32_t slot;  // position of the packet inside the generation
};

/// Generation membership map G_i = B_i + R_i with its transpose.
///
/// members(i) lists B_i in order followed by the annex entries; the reverse
/// index gives, for every packet, each generation holding it and its slot.
/// Immutable once built.
class GenerationLayout {
 public:
  GenerationLayout(CodeParams params, Scheme scheme,
                   std::vector<std::vector<PacketIndex>> members);

  const CodeParams& params() const { return params_; }
  Scheme scheme() const { return scheme_; }
  std::size_t generation_count() const { return members_.size(); }
  std::size_t packet_count() const { return params_.N; }

  std::span<const PacketIndex> members(GenerationIndex gen) const { return members_[gen]; }
  std::span<const Membership> generations_of(PacketIndex packet) const {
    return {reverse_.data() + reverse_offset_[packet],
            reverse_offset_[packet + 1] - reverse_offset_[packet]};
  }
  std::size_t degree(PacketIndex packet) const { return generations_of(packet).size(); }

  /// First packet of B_i and |B_i|.
  PacketIndex base_begin(GenerationIndex gen) const {
    return static_cast<PacketIndex>(gen * params_.h);
  }
  std::size_t base_size(GenerationIndex gen) const;
  std::size_t max_generation_size() const;

  /// {"params": {...}, "scheme": "...", "members": [[...], ...]}
  std::string to_json() const;
  static GenerationLayout from_json(std::string_view text);

 private:
  CodeParams params_;
  Scheme scheme_;
  std::vector<std::vector<PacketIndex>> members_;
  std::vector<std::size_t> reverse_offset_;
  std::vector<Membership> reverse_;
};

/// B_i plus l packets drawn uniformly without replacement from outside B_i.
GenerationLayout make_random_annex(const CodeParams& params, std::uint64_t seed);

/// B_i plus the l packets that follow B_i, wrapping around the end. Requires l <= h.
GenerationLayout make_head_to_toe(const CodeParams& params);

/// Base generations only; params.l is ignored and recorded as 0.
GenerationLayout make_disjoint(const CodeParams& params);

GenerationLayout make_layout(Scheme scheme, const CodeParams& params, std::uint64_t seed);

/// Annex of one generation for the random annex code (0-based packet ids, in
/// draw order). Exposed so samplers can draw single annexes without a layout.
std::vector<PacketIndex> sample_annex(Rng& rng, std::size_t N, PacketIndex base_begin,
                                      std::size_t base_size, std::size_t l);

struct LayoutStats {
  double pi = 0;               // P(packet of B_k lies in R_r), r != k
  double mean_degree = 0;      // E[X], X = generations containing a packet
  double var_degree = 0;       // Var[X]
  double expected_unique = 0;  // E[# packets of a generation in no other one]
  double overlap_prob = 0;     // P(two generations share a packet)
  bool forced_overlap = false; // N - 2h - 2l < 0: annexes cannot avoid each other
};

/// Closed-form overlap statistics of the random annex ensemble.
LayoutStats layout_statistics(const CodeParams& params);

}  // namespace annex
