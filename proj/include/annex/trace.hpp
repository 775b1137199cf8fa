#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annex/codec.hpp"

namespace annex {

// Line-delimited trace of received coded packets, one JSON object per line:
//   {"gen_index":3,"coding_vector":"0a91ff..","payload":"77c2.."}
// Each symbol is written as ceil(m/4) lowercase hex digits.

std::string format_trace_record(const CodedPacket& cp, const GaloisField& field);
CodedPacket parse_trace_record(std::string_view line, const GaloisField& field);

void write_trace(std::ostream& out, std::span<const CodedPacket> trace, const GaloisField& field);
std::vector<CodedPacket> read_trace(std::istream& in, const GaloisField& field);

struct ReplayResult {
  bool complete = false;
  std::size_t packets_used = 0;  // records ingested up to and including completion
  std::vector<DecodeReport> reports;
};

/// Feeds the trace into a fresh decoder until it completes or the trace ends.
ReplayResult replay(const GenerationLayout& layout, const GaloisField& field,
                    std::span<const CodedPacket> trace, DecoderOptions options = {});

}  // namespace annex
