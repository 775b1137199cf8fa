#include "annex/trace.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "annex/errors.hpp"

namespace annex {

namespace {

std::size_t hex_width(const GaloisField& field) { return (field.degree() + 3) / 4; }

std::string to_hex(std::span<const FieldElement> symbols, std::size_t width) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(symbols.size() * width, '0');
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    unsigned v = symbols[i].value;
    for (std::size_t k = 0; k < width; ++k) {
      out[i * width + width - 1 - k] = kDigits[v & 0xF];
      v >>= 4;
    }
  }
  return out;
}

std::vector<FieldElement> from_hex(std::string_view text, const GaloisField& field) {
  const std::size_t width = hex_width(field);
  if (text.size() % width != 0) throw InputError("hex field length is not a multiple of the symbol width");
  std::vector<FieldElement> out(text.size() / width);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < width; ++k) {
      const char c = text[i * width + k];
      std::uint32_t digit = 0;
      if (c >= '0' && c <= '9') {
        digit = static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        digit = static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        digit = static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        throw InputError(std::string("invalid hex digit '") + c + "'");
      }
      v = (v << 4) | digit;
    }
    if (v >= field.size()) throw InputError("symbol value outside the field");
    out[i] = FieldElement(static_cast<std::uint16_t>(v));
  }
  return out;
}

}  // namespace

std::string format_trace_record(const CodedPacket& cp, const GaloisField& field) {
  const std::size_t width = hex_width(field);
  nlohmann::json j;
  j["gen_index"] = cp.gen_index;
  j["coding_vector"] = to_hex(cp.coding_vector, width);
  j["payload"] = to_hex(cp.payload, width);
  return j.dump();
}

CodedPacket parse_trace_record(std::string_view line, const GaloisField& field) {
  try {
    const auto j = nlohmann::json::parse(line);
    CodedPacket cp;
    cp.gen_index = j.at("gen_index").get<GenerationIndex>();
    cp.coding_vector = from_hex(j.at("coding_vector").get<std::string>(), field);
    cp.payload = from_hex(j.at("payload").get<std::string>(), field);
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed trace record: ") + e.what());
  }
}

void write_trace(std::ostream& out, std::span<const CodedPacket> trace, const GaloisField& field) {
  for (const auto& cp : trace) out << format_trace_record(cp, field) << '\n';
}

std::vector<CodedPacket> read_trace(std::istream& in, const GaloisField& field) {
  std::vector<CodedPacket> trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    trace.push_back(parse_trace_record(line, field));
  }
  return trace;
}

ReplayResult replay(const GenerationLayout& layout, const GaloisField& field,
                    std::span<const CodedPacket> trace, DecoderOptions options) {
  ReplayResult result;
  const std::size_t d = trace.empty() ? 1 : trace.front().payload.size();
  Decoder decoder(layout, field, d, options);
  for (const auto& cp : trace) {
    result.reports.push_back(decoder.ingest(cp));
    ++result.packets_used;
    if (decoder.is_complete()) {
      result.complete = true;
      break;
    }
  }
  return result;
}

}  // namespace annex
