#include "annex/codec.hpp"

#include <algorithm>
#include <string>

#include "annex/errors.hpp"

namespace annex {

namespace {

// Uniform symbols of `degree` bits, sliced from 64-bit draws.
void fill_uniform(std::span<FieldElement> out, unsigned degree, Rng& rng) {
  const std::uint64_t mask = (std::uint64_t{1} << degree) - 1;
  const unsigned per_word = 64 / degree;
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = rng();
    for (unsigned k = 0; k < per_word && i < out.size(); ++k, ++i) {
      out[i] = FieldElement(static_cast<std::uint16_t>(word & mask));
      word >>= degree;
    }
  }
}

}  // namespace

std::vector<Packet> random_packets(const GaloisField& field, std::size_t N, std::size_t d,
                                   Rng& rng) {
  std::vector<Packet> packets(N, Packet(d));
  for (auto& p : packets) fill_uniform(p, field.degree(), rng);
  return packets;
}

std::vector<FieldElement> random_coding_vector(const GaloisField& field, std::size_t g,
                                               Rng& rng) {
  std::vector<FieldElement> e(g);
  fill_uniform(e, field.degree(), rng);
  return e;
}

CodedPacket encode_with(const GenerationLayout& layout, const GaloisField& field,
                        std::span<const Packet> packets, GenerationIndex j,
                        std::vector<FieldElement> coding_vector) {
  if (j >= layout.generation_count()) throw InputError("generation index out of range");
  const auto members = layout.members(j);
  if (coding_vector.size() != members.size()) {
    throw InputError("coding vector length does not match generation size");
  }
  const std::size_t d = packets.empty() ? 0 : packets.front().size();
  CodedPacket cp{j, std::move(coding_vector), Packet(d)};
  for (std::size_t i = 0; i < members.size(); ++i) {
    field.axpy(cp.payload, cp.coding_vector[i], packets[members[i]]);
  }
  return cp;
}

CodedPacket encode(const GenerationLayout& layout, const GaloisField& field,
                   std::span<const Packet> packets, GenerationIndex j, Rng& rng) {
  if (j >= layout.generation_count()) throw InputError("generation index out of range");
  return encode_with(layout, field, packets, j,
                     random_coding_vector(field, layout.members(j).size(), rng));
}

Decoder::Decoder(const GenerationLayout& layout, const GaloisField& field,
                 std::size_t payload_size, DecoderOptions options)
    : layout_(layout), field_(field), payload_size_(payload_size), options_(options) {
  if (field.size() != layout.params().q) {
    throw ParameterError("decoder field size differs from the layout's q");
  }
  const std::size_t n = layout.generation_count();
  systems_.resize(n);
  unresolved_members_.resize(n);
  for (GenerationIndex i = 0; i < n; ++i) {
    auto& sys = systems_[i];
    sys.cols = layout.members(i).size();
    sys.width = sys.cols + payload_size_;
    sys.rows.reserve(sys.cols * sys.width);
    sys.row_of_col.assign(sys.cols, -1);
    sys.substituted.assign(sys.cols, 0);
    sys.unresolved = sys.cols;
    unresolved_members_[i] = sys.cols;
  }
  values_.resize(layout.packet_count() * payload_size_);
  resolved_.assign(layout.packet_count(), 0);
}

std::span<const FieldElement> Decoder::value(PacketIndex p) const {
  if (!resolved_[p]) throw StateError("packet " + std::to_string(p) + " is not resolved");
  return {values_.data() + static_cast<std::size_t>(p) * payload_size_, payload_size_};
}

std::vector<Packet> Decoder::recover() const {
  if (!is_complete()) throw StateError("recover() called before decoding completed");
  std::vector<Packet> out(layout_.packet_count());
  for (PacketIndex p = 0; p < out.size(); ++p) {
    const auto v = value(p);
    out[p].assign(v.begin(), v.end());
  }
  return out;
}

DecodeReport Decoder::ingest(const CodedPacket& cp) {
  if (cp.gen_index >= systems_.size()) {
    throw InputError("generation index " + std::to_string(cp.gen_index) + " out of range");
  }
  System& sys = systems_[cp.gen_index];
  if (cp.coding_vector.size() != sys.cols) {
    throw InputError("coding vector has " + std::to_string(cp.coding_vector.size()) +
                     " entries, generation has " + std::to_string(sys.cols) + " members");
  }
  if (cp.payload.size() != payload_size_) throw InputError("payload length mismatch");

  report_ = DecodeReport{};
  ++telemetry_.received;
  ++sys.received;

  if (!options_.cascade) sync(cp.gen_index);

  if (!sys.solved) {
    scratch_.assign(cp.coding_vector.begin(), cp.coding_vector.end());
    scratch_.insert(scratch_.end(), cp.payload.begin(), cp.payload.end());
    std::span<FieldElement> row(scratch_);
    auto payload = row.subspan(sys.cols);
    const auto members = layout_.members(cp.gen_index);
    for (std::size_t c = 0; c < sys.cols; ++c) {
      if (sys.substituted[c] && row[c].value != 0) {
        field_.axpy(payload, row[c], value(members[c]));
        row[c] = FieldElement{};
      }
    }
    report_.innovative = insert_row(cp.gen_index, row);
  }
  if (!report_.innovative) ++telemetry_.non_innovative;

  try_solve(cp.gen_index);
  drain();

  report_.complete = is_complete();
  return report_;
}

bool Decoder::insert_row(GenerationIndex gen, std::span<FieldElement> row) {
  System& sys = systems_[gen];
  for (std::size_t c = 0; c < sys.cols; ++c) {
    if (row[c].value != 0 && sys.row_of_col[c] >= 0) {
      field_.axpy(row, row[c], sys.row(static_cast<std::size_t>(sys.row_of_col[c])));
      ++telemetry_.row_operations;
    }
  }
  std::size_t pivot = 0;
  while (pivot < sys.cols && row[pivot].value == 0) ++pivot;
  if (pivot == sys.cols) return false;

  field_.scale(row, field_.inv(row[pivot]));
  ++telemetry_.row_operations;
  const std::size_t rows = sys.pivot_of_row.size();
  for (std::size_t r = 0; r < rows; ++r) {
    auto stored = sys.row(r);
    if (stored[pivot].value != 0) {
      field_.axpy(stored, stored[pivot], row);
      ++telemetry_.row_operations;
    }
  }
  sys.rows.insert(sys.rows.end(), row.begin(), row.end());
  sys.pivot_of_row.push_back(static_cast<std::uint32_t>(pivot));
  sys.row_of_col[pivot] = static_cast<std::int32_t>(rows);
  telemetry_.max_stored_rows = std::max(telemetry_.max_stored_rows, rows + 1);
  return true;
}

void Decoder::remove_row(System& sys, std::size_t r) {
  const std::size_t last = sys.pivot_of_row.size() - 1;
  sys.row_of_col[sys.pivot_of_row[r]] = -1;
  if (r != last) {
    auto dst = sys.row(r);
    auto src = sys.row(last);
    std::copy(src.begin(), src.end(), dst.begin());
    sys.pivot_of_row[r] = sys.pivot_of_row[last];
    sys.row_of_col[sys.pivot_of_row[r]] = static_cast<std::int32_t>(r);
  }
  sys.pivot_of_row.pop_back();
  sys.rows.resize(sys.pivot_of_row.size() * sys.width);
}

void Decoder::substitute(GenerationIndex gen, std::uint32_t slot) {
  System& sys = systems_[gen];
  if (sys.substituted[slot]) return;
  sys.substituted[slot] = 1;
  --sys.unresolved;

  const auto v = value(layout_.members(gen)[slot]);
  const std::size_t rows = sys.pivot_of_row.size();
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = sys.row(r);
    if (row[slot].value != 0) {
      field_.axpy(row.subspan(sys.cols), row[slot], v);
      row[slot] = FieldElement{};
      ++telemetry_.row_operations;
    }
  }
  // The row pivoting on this column lost its pivot: pull it out and
  // re-insert; if nothing is left it carried no further information.
  const std::int32_t r = sys.row_of_col[slot];
  if (r >= 0) {
    auto row = sys.row(static_cast<std::size_t>(r));
    std::vector<FieldElement> orphan(row.begin(), row.end());
    remove_row(sys, static_cast<std::size_t>(r));
    insert_row(gen, orphan);
  }
}

void Decoder::sync(GenerationIndex gen) {
  const auto members = layout_.members(gen);
  System& sys = systems_[gen];
  for (std::uint32_t slot = 0; slot < members.size(); ++slot) {
    if (!sys.substituted[slot] && resolved_[members[slot]]) substitute(gen, slot);
  }
}

void Decoder::try_solve(GenerationIndex gen) {
  System& sys = systems_[gen];
  if (sys.solved) return;
  if (sys.unresolved == 0) {
    sys.solved = true;
    return;
  }
  if (sys.pivot_of_row.size() != sys.unresolved) return;

  // Every unresolved column is a pivot and rows are fully reduced, so each
  // row reads e_c · x = payload.
  telemetry_.max_solve_dimension = std::max(telemetry_.max_solve_dimension, sys.unresolved);
  const auto members = layout_.members(gen);
  for (std::size_t r = 0; r < sys.pivot_of_row.size(); ++r) {
    const std::uint32_t c = sys.pivot_of_row[r];
    sys.substituted[c] = 1;
    resolve(members[c], sys.row(r).subspan(sys.cols));
  }
  sys.unresolved = 0;
  sys.rows.clear();
  sys.pivot_of_row.clear();
  std::fill(sys.row_of_col.begin(), sys.row_of_col.end(), -1);
  sys.solved = true;
}

void Decoder::resolve(PacketIndex p, std::span<const FieldElement> v) {
  if (resolved_[p]) return;
  resolved_[p] = 1;
  std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(p * payload_size_));
  ++resolved_count_;
  ++report_.newly_resolved_packets;
  for (const auto& m : layout_.generations_of(p)) {
    if (--unresolved_members_[m.generation] == 0) {
      ++decoded_generations_;
      ++report_.newly_decoded_generations;
    }
  }
  if (options_.cascade) pending_.push_back(p);
}

void Decoder::drain() {
  while (!pending_.empty()) {
    const PacketIndex p = pending_.front();
    pending_.pop_front();
    for (const auto& m : layout_.generations_of(p)) {
      if (systems_[m.generation].solved) continue;
      substitute(m.generation, m.slot);
      try_solve(m.generation);
    }
  }
}

}  // namespace annex
