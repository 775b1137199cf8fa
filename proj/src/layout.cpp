#include "annex/layout.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "annex/errors.hpp"

namespace annex {

void CodeParams::validate() const {
  if (h == 0 || N == 0) throw ParameterError("N and h must be positive");
  if (h > N) throw ParameterError("base generation size h exceeds N");
  if (l > N - h) {
    throw ParameterError("annex size l=" + std::to_string(l) + " exceeds N-h=" +
                         std::to_string(N - h));
  }
  if (d == 0) throw ParameterError("packets need at least one symbol (d >= 1)");
  if (q < 2 || !std::has_single_bit(q) || q > 65536) {
    throw ParameterError("q must be a power of two in [2, 65536]");
  }
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRandomAnnex: return "random-annex";
    case Scheme::kHeadToToe: return "head-to-toe";
    case Scheme::kDisjoint: return "disjoint";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "random-annex") return Scheme::kRandomAnnex;
  if (name == "head-to-toe") return Scheme::kHeadToToe;
  if (name == "disjoint") return Scheme::kDisjoint;
  throw ParameterError("unknown scheme '" + std::string(name) +
                       "' (expected random-annex, head-to-toe or disjoint)");
}

GenerationLayout::GenerationLayout(CodeParams params, Scheme scheme,
                                   std::vector<std::vector<PacketIndex>> members)
    : params_(params), scheme_(scheme), members_(std::move(members)) {
  params_.validate();
  const std::size_t n = params_.n();
  if (members_.size() != n) {
    throw InputError("layout has " + std::to_string(members_.size()) +
                     " generations, expected " + std::to_string(n));
  }

  std::vector<std::uint32_t> seen(params_.N, 0);
  std::vector<std::size_t> degree(params_.N, 0);
  for (GenerationIndex i = 0; i < n; ++i) {
    const auto& gen = members_[i];
    const PacketIndex b0 = base_begin(i);
    const std::size_t bs = base_size(i);
    if (gen.size() != bs + params_.l) {
      throw InputError("generation " + std::to_string(i) + " has " + std::to_string(gen.size()) +
                       " members, expected " + std::to_string(bs + params_.l));
    }
    for (std::size_t k = 0; k < bs; ++k) {
      if (gen[k] != b0 + k) {
        throw InputError("generation " + std::to_string(i) + " does not start with its base block");
      }
    }
    for (std::size_t k = 0; k < gen.size(); ++k) {
      const PacketIndex p = gen[k];
      if (p >= params_.N) throw InputError("packet index out of range");
      if (seen[p] == i + 1) {
        throw InputError("generation " + std::to_string(i) + " lists packet " +
                         std::to_string(p) + " twice");
      }
      seen[p] = i + 1;
      ++degree[p];
    }
  }

  reverse_offset_.assign(params_.N + 1, 0);
  for (std::size_t p = 0; p < params_.N; ++p) reverse_offset_[p + 1] = reverse_offset_[p] + degree[p];
  reverse_.resize(reverse_offset_.back());
  std::vector<std::size_t> fill(reverse_offset_.begin(), reverse_offset_.end() - 1);
  for (GenerationIndex i = 0; i < n; ++i) {
    for (std::uint32_t slot = 0; slot < members_[i].size(); ++slot) {
      reverse_[fill[members_[i][slot]]++] = Membership{i, slot};
    }
  }
}

std::size_t GenerationLayout::base_size(GenerationIndex gen) const {
  const std::size_t begin = static_cast<std::size_t>(gen) * params_.h;
  return std::min(params_.h, params_.N - begin);
}

std::size_t GenerationLayout::max_generation_size() const {
  std::size_t m = 0;
  for (const auto& gen : members_) m = std::max(m, gen.size());
  return m;
}

std::string GenerationLayout::to_json() const {
  nlohmann::json j;
  j["params"] = {{"N", params_.N}, {"h", params_.h}, {"l", params_.l},
                 {"d", params_.d}, {"q", params_.q}};
  j["scheme"] = std::string(to_string(scheme_));
  j["members"] = members_;
  return j.dump();
}

GenerationLayout GenerationLayout::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CodeParams params;
    const auto& p = j.at("params");
    params.N = p.at("N").get<std::size_t>();
    params.h = p.at("h").get<std::size_t>();
    params.l = p.at("l").get<std::size_t>();
    params.d = p.value("d", std::size_t{1});
    params.q = p.value("q", std::uint32_t{256});
    const Scheme scheme = parse_scheme(j.value("scheme", std::string("random-annex")));
    auto members = j.at("members").get<std::vector<std::vector<PacketIndex>>>();
    return GenerationLayout(params, scheme, std::move(members));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed layout JSON: ") + e.what());
  }
}

std::vector<PacketIndex> sample_annex(Rng& rng, std::size_t N, PacketIndex base_begin,
                                      std::size_t base_size, std::size_t l) {
  // Partial Fisher-Yates over the virtual array of the N - |B| packets outside
  // B; only displaced positions are stored, so a draw costs O(l) not O(N).
  const std::size_t pool = N - base_size;
  std::vector<std::pair<std::size_t, std::size_t>> displaced;
  displaced.reserve(2 * l);
  auto value_at = [&](std::size_t pos) {
    for (const auto& [k, v] : displaced) {
      if (k == pos) return v;
    }
    return pos;
  };
  auto assign = [&](std::size_t pos, std::size_t v) {
    for (auto& [k, old] : displaced) {
      if (k == pos) {
        old = v;
        return;
      }
    }
    displaced.emplace_back(pos, v);
  };

  std::vector<PacketIndex> annex;
  annex.reserve(l);
  for (std::size_t t = 0; t < l; ++t) {
    const std::size_t u = t + uniform_index(rng, pool - t);
    const std::size_t vt = value_at(t);
    const std::size_t vu = value_at(u);
    assign(u, vt);
    assign(t, vu);
    const std::size_t outside = vu;
    annex.push_back(static_cast<PacketIndex>(outside < base_begin ? outside : outside + base_size));
  }
  return annex;
}

GenerationLayout make_random_annex(const CodeParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const std::size_t n = params.n();
  std::vector<std::vector<PacketIndex>> members(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b0 = static_cast<PacketIndex>(i * params.h);
    const std::size_t bs = std::min(params.h, params.N - b0);
    auto& gen = members[i];
    gen.reserve(bs + params.l);
    for (std::size_t k = 0; k < bs; ++k) gen.push_back(static_cast<PacketIndex>(b0 + k));
    if (params.l > params.N - bs) {
      throw ParameterError("annex larger than the packets outside the last base generation");
    }
    auto annex = sample_annex(rng, params.N, b0, bs, params.l);
    gen.insert(gen.end(), annex.begin(), annex.end());
  }
  return GenerationLayout(params, Scheme::kRandomAnnex, std::move(members));
}

GenerationLayout make_head_to_toe(const CodeParams& params) {
  params.validate();
  if (params.l > params.h) {
    throw ParameterError("head-to-toe overlap l=" + std::to_string(params.l) +
                         " exceeds base size h=" + std::to_string(params.h));
  }
  const std::size_t n = params.n();
  std::vector<std::vector<PacketIndex>> members(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b0 = i * params.h;
    const std::size_t bs = std::min(params.h, params.N - b0);
    auto& gen = members[i];
    for (std::size_t k = 0; k < bs + params.l; ++k) {
      gen.push_back(static_cast<PacketIndex>((b0 + k) % params.N));
    }
  }
  return GenerationLayout(params, Scheme::kHeadToToe, std::move(members));
}

GenerationLayout make_disjoint(const CodeParams& params) {
  CodeParams p = params;
  p.l = 0;
  p.validate();
  const std::size_t n = p.n();
  std::vector<std::vector<PacketIndex>> members(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b0 = i * p.h;
    const std::size_t bs = std::min(p.h, p.N - b0);
    for (std::size_t k = 0; k < bs; ++k) members[i].push_back(static_cast<PacketIndex>(b0 + k));
  }
  return GenerationLayout(p, Scheme::kDisjoint, std::move(members));
}

GenerationLayout make_layout(Scheme scheme, const CodeParams& params, std::uint64_t seed) {
  switch (scheme) {
    case Scheme::kRandomAnnex: return make_random_annex(params, seed);
    case Scheme::kHeadToToe: return make_head_to_toe(params);
    case Scheme::kDisjoint: return make_disjoint(params);
  }
  throw ParameterError("unknown scheme");
}

LayoutStats layout_statistics(const CodeParams& params) {
  params.validate();
  const double N = static_cast<double>(params.N);
  const double h = static_cast<double>(params.h);
  const double l = static_cast<double>(params.l);
  const double n = static_cast<double>(params.n());

  LayoutStats s;
  s.pi = params.N == params.h ? 0.0 : l / (N - h);
  s.mean_degree = 1.0 + (n - 1.0) * s.pi;
  s.var_degree = (n - 1.0) * s.pi * (1.0 - s.pi);
  s.expected_unique = h * std::pow(1.0 - s.pi, n - 1.0);

  if (params.n() < 2) {
    s.overlap_prob = 0.0;
  } else if (N - 2 * h - 2 * l < 0) {
    s.overlap_prob = 1.0;
    s.forced_overlap = true;
  } else {
    const double log_multinomial =
        std::lgamma(N - 2 * h + 1) - 2 * std::lgamma(l + 1) - std::lgamma(N - 2 * h - 2 * l + 1);
    const double log_choose = std::lgamma(N - h + 1) - std::lgamma(l + 1) - std::lgamma(N - h - l + 1);
    s.overlap_prob = 1.0 - std::exp(log_multinomial - 2 * log_choose);
  }
  return s;
}

}  // namespace annex
