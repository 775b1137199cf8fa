#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "annex/gfield.hpp"
#include "annex/layout.hpp"
#include "annex/rng.hpp"

namespace annex {

/// d information symbols.
using Packet = std::vector<FieldElement>;

struct CodedPacket {
  GenerationIndex gen_index = 0;
  std::vector<FieldElement> coding_vector;  // one coefficient per member of G_j
  std::vector<FieldElement> payload;        // d symbols

  friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

/// N packets of d uniform symbols.
std::vector<Packet> random_packets(const GaloisField& field, std::size_t N, std::size_t d,
                                   Rng& rng);

/// Coding vector of g i.i.d. uniform coefficients (zero included).
std::vector<FieldElement> random_coding_vector(const GaloisField& field, std::size_t g,
                                               Rng& rng);

/// Linear combination of the members of generation j with the given coefficients.
CodedPacket encode_with(const GenerationLayout& layout, const GaloisField& field,
                        std::span<const Packet> packets, GenerationIndex j,
                        std::vector<FieldElement> coding_vector);

/// Coded packet from generation j with a fresh uniform coding vector.
CodedPacket encode(const GenerationLayout& layout, const GaloisField& field,
                   std::span<const Packet> packets, GenerationIndex j, Rng& rng);

struct DecodeReport {
  bool innovative = false;
  std::size_t newly_decoded_generations = 0;
  std::size_t newly_resolved_packets = 0;
  bool complete = false;

  friend bool operator==(const DecodeReport&, const DecodeReport&) = default;
};

struct DecoderOptions {
  /// When false, resolved packets are only substituted into a generation's
  /// system the next time that generation receives a packet, and decoding a
  /// generation never triggers decoding elsewhere.
  bool cascade = true;
};

struct DecoderTelemetry {
  std::size_t received = 0;
  std::size_t non_innovative = 0;
  std::size_t max_stored_rows = 0;
  std::size_t max_solve_dimension = 0;  // unknowns left when a generation was solved
  std::uint64_t row_operations = 0;     // axpy/scale calls on stored rows
};

/// Progressive decoder for coding over overlapping generations.
///
/// Each generation keeps its received rows in reduced row echelon form over
/// the members not yet resolved. A generation is solved as soon as its rank
/// equals its number of unresolved members; the solved packets are then
/// substituted into every other generation holding them, which may in turn
/// become solvable (the cascade).
///
/// Holds references to the layout and the field; both must outlive it.
class Decoder {
 public:
  Decoder(const GenerationLayout& layout, const GaloisField& field, std::size_t payload_size,
          DecoderOptions options = {});

  /// Throws InputError on a bad generation index or vector length.
  DecodeReport ingest(const CodedPacket& cp);

  bool is_complete() const { return resolved_count_ == layout_.packet_count(); }

  /// All N packets; throws StateError before completion.
  std::vector<Packet> recover() const;

  bool is_resolved(PacketIndex p) const { return resolved_[p] != 0; }
  /// Throws StateError if p is not resolved yet.
  std::span<const FieldElement> value(PacketIndex p) const;

  std::size_t resolved_count() const { return resolved_count_; }
  std::size_t decoded_generation_count() const { return decoded_generations_; }
  bool generation_decoded(GenerationIndex gen) const { return unresolved_members_[gen] == 0; }
  /// Independent rows currently stored for a generation.
  std::size_t stored_rank(GenerationIndex gen) const { return systems_[gen].pivot_of_row.size(); }
  std::size_t received(GenerationIndex gen) const { return systems_[gen].received; }
  const DecoderTelemetry& telemetry() const { return telemetry_; }

 private:
  struct System {
    std::size_t cols = 0;
    std::size_t width = 0;                     // cols + payload symbols
    std::vector<FieldElement> rows;            // row-major, pivot_of_row.size() rows
    std::vector<std::uint32_t> pivot_of_row;
    std::vector<std::int32_t> row_of_col;      // -1 when the column has no pivot
    std::vector<std::uint8_t> substituted;     // column eliminated with its resolved value
    std::size_t unresolved = 0;                // columns not substituted
    std::size_t received = 0;
    bool solved = false;

    std::span<FieldElement> row(std::size_t r) { return {rows.data() + r * width, width}; }
  };

  bool insert_row(GenerationIndex gen, std::span<FieldElement> row);
  void remove_row(System& sys, std::size_t r);
  void substitute(GenerationIndex gen, std::uint32_t slot);
  void sync(GenerationIndex gen);
  void try_solve(GenerationIndex gen);
  void resolve(PacketIndex p, std::span<const FieldElement> value);
  void drain();

  const GenerationLayout& layout_;
  const GaloisField& field_;
  std::size_t payload_size_;
  DecoderOptions options_;

  std::vector<System> systems_;
  std::vector<FieldElement> values_;  // N * d
  std::vector<std::uint8_t> resolved_;
  std::vector<std::size_t> unresolved_members_;
  std::size_t resolved_count_ = 0;
  std::size_t decoded_generations_ = 0;
  std::deque<PacketIndex> pending_;
  std::vector<FieldElement> scratch_;

  DecodeReport report_;
  DecoderTelemetry telemetry_;
};

}  // namespace annex
