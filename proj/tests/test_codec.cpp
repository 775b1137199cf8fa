#include <gtest/gtest.h>

#include <sstream>

#include "annex/codec.hpp"
#include "annex/errors.hpp"
#include "annex/trace.hpp"
#include "oracles.hpp"

using namespace annex;

namespace {

FieldElement fe(std::uint16_t v) { return FieldElement(v); }

std::vector<FieldElement> vec(std::initializer_list<std::uint16_t> v) {
  std::vector<FieldElement> out;
  for (auto x : v) out.push_back(fe(x));
  return out;
}

}  // namespace

TEST(Encode, BinaryXor) {
  const GaloisField f(1);
  const auto layout = make_disjoint({2, 2, 0, 3, 2});
  const std::vector<Packet> src{vec({1, 0, 1}), vec({1, 1, 0})};
  const auto cp = encode_with(layout, f, src, 0, vec({1, 1}));
  EXPECT_EQ(cp.payload, vec({0, 1, 1}));
}

TEST(Encode, ZeroVectorGivesZeroPayload) {
  const GaloisField f;
  const auto layout = make_disjoint({4, 4, 0, 2});
  Rng rng(1);
  const auto src = random_packets(f, 4, 2, rng);
  const auto cp = encode_with(layout, f, src, 0, vec({0, 0, 0, 0}));
  EXPECT_EQ(cp.payload, vec({0, 0}));
  Decoder dec(layout, f, 2);
  EXPECT_FALSE(dec.ingest(cp).innovative);
  EXPECT_EQ(dec.stored_rank(0), 0u);
}

TEST(Encode, PayloadIsDotProduct) {
  const GaloisField f;
  const auto layout = make_random_annex({40, 8, 4}, 3);
  Rng rng(5);
  const auto src = random_packets(f, 40, 1, rng);
  for (int t = 0; t < 200; ++t) {
    const auto j = static_cast<GenerationIndex>(t % 5);
    const auto cp = encode(layout, f, src, j, rng);
    std::uint32_t acc = 0;
    const auto mem = layout.members(j);
    for (std::size_t i = 0; i < mem.size(); ++i)
      acc ^= clmul_mod(cp.coding_vector[i].value, src[mem[i]][0].value, 8, 0x11B);
    EXPECT_EQ(cp.payload[0].value, acc);
  }
}

TEST(Decoder, SinglePacket) {
  const GaloisField f;
  const auto layout = make_disjoint({1, 1, 0});
  const std::vector<Packet> src{vec({0x42})};
  Decoder dec(layout, f, 1);
  EXPECT_FALSE(dec.is_complete());
  EXPECT_THROW(dec.recover(), StateError);
  EXPECT_THROW(dec.value(0), StateError);
  const auto cp = encode_with(layout, f, src, 0, vec({0x07}));
  const auto rep = dec.ingest(cp);
  EXPECT_TRUE(rep.innovative);
  EXPECT_TRUE(rep.complete);
  EXPECT_EQ(rep.newly_decoded_generations, 1u);
  EXPECT_EQ(dec.recover()[0], src[0]);
  EXPECT_EQ(dec.value(0)[0], f.mul(f.inv(fe(7)), cp.payload[0]));
}

TEST(Decoder, DuplicateRowIsNotInnovative) {
  const GaloisField f;
  const auto layout = make_disjoint({3, 3, 0});
  Rng rng(2);
  const auto src = random_packets(f, 3, 1, rng);
  Decoder dec(layout, f, 1);
  const auto cp = encode_with(layout, f, src, 0, vec({1, 2, 3}));
  EXPECT_TRUE(dec.ingest(cp).innovative);
  const auto rep = dec.ingest(cp);
  EXPECT_FALSE(rep.innovative);
  EXPECT_EQ(rep.newly_resolved_packets, 0u);
  EXPECT_EQ(dec.stored_rank(0), 1u);
  EXPECT_EQ(dec.telemetry().non_innovative, 1u);
  auto scaled = encode_with(layout, f, src, 0, vec({2, 4, 6}));
  EXPECT_FALSE(dec.ingest(scaled).innovative);
}

TEST(Decoder, InputErrors) {
  const GaloisField f;
  const auto layout = make_disjoint({4, 2, 0});
  Decoder dec(layout, f, 1);
  EXPECT_THROW(dec.ingest({5, vec({1, 1}), vec({0})}), InputError);
  EXPECT_THROW(dec.ingest({0, vec({1, 1, 1}), vec({0})}), InputError);
  EXPECT_THROW(dec.ingest({0, vec({1, 1}), vec({0, 0})}), InputError);
  EXPECT_THROW(Decoder(layout, GaloisField(4), 1), ParameterError);
}

// G0={0,1,2}, G1={2,3,4}, G2={4,5,0}. Two rows for G1 cannot be solved alone,
// but once G0 decodes packet 2 the cascade finishes G1.
TEST(Decoder, HeadToToeCascade) {
  const GaloisField f;
  const auto layout = make_head_to_toe({6, 2, 1});
  Rng rng(8);
  const auto src = random_packets(f, 6, 4, rng);
  Decoder dec(layout, f, 4);
  std::vector<CodedPacket> received{
      encode_with(layout, f, src, 1, vec({3, 1, 7})),
      encode_with(layout, f, src, 1, vec({5, 9, 2})),
      encode_with(layout, f, src, 0, vec({1, 2, 3})),
      encode_with(layout, f, src, 0, vec({4, 5, 6})),
  };
  for (const auto& cp : received) {
    const auto rep = dec.ingest(cp);
    EXPECT_TRUE(rep.innovative);
    EXPECT_EQ(rep.newly_resolved_packets, 0u);
  }
  EXPECT_EQ(dec.stored_rank(1), 2u);
  received.push_back(encode_with(layout, f, src, 0, vec({7, 1, 1})));
  const auto rep = dec.ingest(received.back());
  EXPECT_EQ(rep.newly_decoded_generations, 2u);
  EXPECT_EQ(rep.newly_resolved_packets, 5u);
  EXPECT_TRUE(dec.generation_decoded(0));
  EXPECT_TRUE(dec.generation_decoded(1));
  EXPECT_FALSE(dec.generation_decoded(2));

  const auto global = oracle::global_determinable(layout, f, received);
  for (PacketIndex p = 0; p < 6; ++p) {
    EXPECT_EQ(dec.is_resolved(p), static_cast<bool>(global[p])) << p;
    if (dec.is_resolved(p)) EXPECT_TRUE(std::ranges::equal(dec.value(p), src[p]));
  }

  // Without the cascade G1 waits for its next packet.
  Decoder lazy(layout, f, 4, {.cascade = false});
  for (const auto& cp : received) lazy.ingest(cp);
  EXPECT_TRUE(lazy.generation_decoded(0));
  EXPECT_FALSE(lazy.generation_decoded(1));
  EXPECT_EQ(lazy.resolved_count(), 3u);
  const auto extra = encode_with(layout, f, src, 1, vec({0, 0, 0}));
  lazy.ingest(extra);
  EXPECT_TRUE(lazy.generation_decoded(1));
}

// Random small layouts: after every ingest the resolved set equals the
// per-generation solvability fixpoint, is contained in the globally
// determinable set, and every value is correct.
TEST(Decoder, SmallCasesMatchFixpointOracle) {
  std::size_t cases = 0;
  for (std::uint32_t q : {2u, 4u, 256u}) {
    const auto f = GaloisField::with_size(q);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      Rng rng(seed * 7919 + q);
      const std::size_t N = 4 + seed % 9;  // 4..12
      const std::size_t h = 1 + seed % 4;
      const std::size_t l = std::min<std::size_t>(seed % 3, N - h);
      const Scheme scheme = seed % 2 ? Scheme::kRandomAnnex : Scheme::kHeadToToe;
      const CodeParams p{N, h, scheme == Scheme::kHeadToToe ? std::min(l, h) : l, 1, q};
      const auto layout = make_layout(scheme, p, seed);
      const auto src = random_packets(f, N, 1, rng);
      Decoder dec(layout, f, 1);
      std::vector<CodedPacket> received;
      std::size_t last = 0;
      while (!dec.is_complete()) {
        const auto j = static_cast<GenerationIndex>(uniform_index(rng, layout.generation_count()));
        received.push_back(encode(layout, f, src, j, rng));
        dec.ingest(received.back());
        ASSERT_GE(dec.resolved_count(), last);
        last = dec.resolved_count();
        ASSERT_EQ(dec.resolved_count(), oracle::fixpoint_resolved(layout, f, received));
        const auto global = oracle::global_determinable(layout, f, received);
        for (PacketIndex x = 0; x < N; ++x) {
          if (!dec.is_resolved(x)) continue;
          ASSERT_TRUE(global[x]);
          ASSERT_EQ(dec.value(x)[0], src[x][0]);
        }
        for (GenerationIndex g = 0; g < layout.generation_count(); ++g) {
          ASSERT_LE(dec.stored_rank(g), layout.members(g).size());
        }
      }
      ASSERT_EQ(dec.recover(), src);
      ++cases;
    }
  }
  EXPECT_EQ(cases, 180u);
}

TEST(Decoder, CascadeNeverSlowerThanLazy) {
  const GaloisField f;
  const CodeParams p{120, 10, 5};
  std::size_t strictly_faster = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto layout = make_random_annex(p, seed);
    Rng rng(seed + 100);
    const auto src = random_packets(f, p.N, 1, rng);
    std::vector<CodedPacket> trace;
    for (int t = 0; t < 3000; ++t) {
      trace.push_back(encode(layout, f, src,
                             static_cast<GenerationIndex>(uniform_index(rng, layout.generation_count())), rng));
    }
    const auto eager = replay(layout, f, trace, {.cascade = true});
    const auto lazy = replay(layout, f, trace, {.cascade = false});
    ASSERT_TRUE(eager.complete);
    ASSERT_TRUE(lazy.complete);
    EXPECT_LE(eager.packets_used, lazy.packets_used);
    strictly_faster += eager.packets_used < lazy.packets_used;
    // the resolved set after each prefix is at least as large
    Decoder a(layout, f, 1), b(layout, f, 1, {.cascade = false});
    for (std::size_t t = 0; t < lazy.packets_used; ++t) {
      a.ingest(trace[t]);
      b.ingest(trace[t]);
      ASSERT_GE(a.resolved_count(), b.resolved_count());
    }
  }
  EXPECT_GT(strictly_faster, 0u);
}

TEST(Decoder, DeterministicReports) {
  const GaloisField f;
  const auto layout = make_random_annex({200, 20, 6}, 4);
  auto run = [&] {
    Rng rng(77);
    const auto src = random_packets(f, 200, 3, rng);
    Decoder dec(layout, f, 3);
    std::vector<DecodeReport> reps;
    while (!dec.is_complete()) {
      reps.push_back(dec.ingest(encode(
          layout, f, src, static_cast<GenerationIndex>(uniform_index(rng, layout.generation_count())), rng)));
    }
    return reps;
  };
  EXPECT_EQ(run(), run());
}

TEST(Decoder, TelemetryBounds) {
  const GaloisField f;
  const CodeParams p{1000, 25, 12};
  const auto layout = make_random_annex(p, 11);
  Rng rng(12);
  const auto src = random_packets(f, p.N, 1, rng);
  Decoder dec(layout, f, 1);
  while (!dec.is_complete()) {
    dec.ingest(encode(layout, f, src,
                      static_cast<GenerationIndex>(uniform_index(rng, layout.generation_count())), rng));
  }
  const auto& t = dec.telemetry();
  EXPECT_LE(t.max_solve_dimension, p.g());
  EXPECT_LE(t.max_stored_rows, p.g());
  EXPECT_GT(t.row_operations, 0u);
  EXPECT_EQ(dec.decoded_generation_count(), layout.generation_count());
  EXPECT_EQ(dec.recover(), src);
}

TEST(Trace, RoundTripAndReplay) {
  for (std::uint32_t q : {2u, 16u, 256u, 65536u}) {
    const auto f = GaloisField::with_size(q);
    const auto layout = make_random_annex({30, 5, 2, 2, q}, 1);
    Rng rng(q);
    const auto src = random_packets(f, 30, 2, rng);
    std::vector<CodedPacket> trace;
    Decoder dec(layout, f, 2);
    while (!dec.is_complete()) {
      trace.push_back(encode(layout, f, src,
                             static_cast<GenerationIndex>(uniform_index(rng, layout.generation_count())), rng));
      dec.ingest(trace.back());
    }
    std::stringstream ss;
    write_trace(ss, trace, f);
    const auto back = read_trace(ss, f);
    EXPECT_EQ(back, trace);
    const auto rep = replay(layout, f, back);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.packets_used, trace.size());
  }
  const GaloisField f;
  EXPECT_EQ(format_trace_record({3, vec({0x0a, 0xff}), vec({0x01})}, f),
            R"({"coding_vector":"0aff","gen_index":3,"payload":"01"})");
  EXPECT_THROW(parse_trace_record(R"({"gen_index":0,"coding_vector":"0g","payload":""})", f), InputError);
  EXPECT_THROW(parse_trace_record("nope", f), InputError);
}
