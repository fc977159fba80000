#include <gtest/gtest.h>

#include "ospfsec/auth.hpp"
#include "ospfsec/codec.hpp"
#include "support/checksum_oracle.hpp"
#include "support/gen.hpp"
#include "support/md5_oracle.hpp"

using namespace ospfsec;
using namespace ospfsec::codec;

namespace {

constexpr std::uint64_t kSeed = 20110101;

// Everything decode() reports except the checksum, which encode recomputes.
OspfPacket without_checksum(OspfPacket p) {
  p.header.checksum = 0;
  return p;
}

bool in_auth_field(std::size_t i) { return i >= 16 && i < 24; }

}  // namespace

TEST(CodecProperties, EncodeDecodeRoundTrip) {
  gen::Rng rng(kSeed);
  for (int i = 0; i < 10'000; ++i) {
    const auto p = gen::packet(rng, gen::au_type(rng));
    auto frame = encode(p);
    ASSERT_TRUE(frame) << "iteration " << i;
    auto back = decode(frame->wire());
    ASSERT_TRUE(back) << "iteration " << i << ": " << to_string(back.error());
    ASSERT_EQ(*back, p) << "iteration " << i;
    ASSERT_EQ(encode(*back)->wire(), frame->wire());
  }
}

TEST(CodecProperties, DecodeIsTotalOnRandomBytes) {
  gen::Rng rng(kSeed + 1);
  std::size_t ok = 0;
  for (int i = 0; i < 50'000; ++i) {
    const auto wire = gen::bytes(rng, gen::below(rng, 120));
    auto p = decode(wire);
    if (p) {
      ++ok;
      auto again = decode(encode(*p)->wire());
      ASSERT_TRUE(again);
      ASSERT_EQ(without_checksum(*again), without_checksum(*p));
    }
  }
  // random bytes almost never carry version 2 and a matching length
  EXPECT_LT(ok, 100u);
}

TEST(CodecProperties, DecodeIsTotalOnMutatedFrames) {
  gen::Rng rng(kSeed + 2);
  for (int i = 0; i < 50'000; ++i) {
    auto wire = encode(gen::packet(rng, gen::au_type(rng)))->wire();
    const auto edits = 1 + gen::below(rng, 4);
    for (std::size_t e = 0; e < edits; ++e) {
      switch (gen::below(rng, 3)) {
        case 0:
          wire[gen::below(rng, wire.size())] ^= static_cast<std::uint8_t>(1 + gen::below(rng, 255));
          break;
        case 1:
          wire.resize(gen::below(rng, wire.size() + 1));
          break;
        default:
          wire.push_back(static_cast<std::uint8_t>(rng()));
      }
      if (wire.empty()) break;
    }
    auto p = decode(wire);
    if (p) {
      auto frame = split_wire(wire);
      ASSERT_TRUE(frame);
      ASSERT_EQ(frame->packet_bytes.size(), p->header.packet_length);
    }
  }
}

TEST(CodecProperties, ChecksumMatchesOracle) {
  gen::Rng rng(kSeed + 3);
  for (int i = 0; i < 10'000; ++i) {
    auto p = gen::packet(rng, gen::au_type(rng) == AuType::Simple ? AuType::Simple : AuType::Null);
    const auto bytes = serialize(p).value();
    ASSERT_EQ(compute_checksum(bytes), oracle::ospf_checksum(bytes));
    ASSERT_TRUE(checksum_valid(bytes));
  }
}

TEST(CodecProperties, AnySingleBitFlipOutsideAuthFieldBreaksChecksum) {
  gen::Rng rng(kSeed + 4);
  for (int i = 0; i < 300; ++i) {
    const auto bytes = serialize(gen::packet(rng, AuType::Null)).value();
    for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
      for (int bit = 0; bit < 8; ++bit) {
        auto flipped = bytes;
        flipped[pos] ^= static_cast<std::uint8_t>(1u << bit);
        ASSERT_EQ(checksum_valid(flipped), in_auth_field(pos)) << "byte " << pos << " bit " << bit;
      }
    }
  }
}

TEST(AuthProperties, DigestMatchesOracleConstruction) {
  gen::Rng rng(kSeed + 5);
  for (int i = 0; i < 2'000; ++i) {
    auth::AuthKey key{static_cast<std::uint8_t>(rng()), gen::secret(rng), {}, {}};
    const auto seq = gen::u32(rng);
    auto frame = auth::sign_md5(gen::bare_packet(rng), key, seq);
    Bytes material = frame.packet_bytes;
    Bytes padded = key.secret;
    padded.resize(16, 0);
    material.insert(material.end(), padded.begin(), padded.end());
    ASSERT_TRUE(frame.digest);
    ASSERT_EQ(*frame.digest, oracle::md5(material));
    auto f = CryptoAuthField::unpack(peek_auth_field(frame.packet_bytes));
    ASSERT_EQ(f.key_id, key.key_id);
    ASSERT_EQ(f.crypto_sequence, seq);
    ASSERT_EQ(f.auth_data_length, 16);
  }
}

TEST(AuthProperties, AnyBitFlipInSignedFrameIsRejected) {
  gen::Rng rng(kSeed + 6);
  const auto now = parse_iso8601("2011-01-01T00:00:00Z").value();
  for (int i = 0; i < 40; ++i) {
    auth::AuthKey key{1, gen::secret(rng), now - Seconds{100}, now + Seconds{100}};
    const auto chain = auth::make_key_chain({key}, Seconds{5}).value();
    const auto wire = auth::sign_md5(gen::bare_packet(rng), key, gen::u32(rng)).wire();
    ASSERT_EQ(auth::verify_md5(split_wire(wire).value(), chain, now), Verdict::Accept);
    for (std::size_t pos = 0; pos < wire.size(); ++pos) {
      auto flipped = wire;
      flipped[pos] ^= static_cast<std::uint8_t>(1u << gen::below(rng, 8));
      auto frame = split_wire(flipped);
      if (!frame) continue;
      ASSERT_NE(auth::verify_md5(*frame, chain, now), Verdict::Accept) << "byte " << pos;
    }
  }
}

TEST(AuthProperties, SimplePasswordAcceptsOnlyExactMatch) {
  gen::Rng rng(kSeed + 7);
  for (int i = 0; i < 5'000; ++i) {
    auth::SimplePassword a{};
    auth::SimplePassword b{};
    for (auto& x : a) x = static_cast<std::uint8_t>(rng());
    b = a;
    if (rng() % 2) b[gen::below(rng, b.size())] ^= static_cast<std::uint8_t>(1 + gen::below(rng, 255));
    const auto bytes = serialize(auth::sign_simple(gen::bare_packet(rng), a)).value();
    ASSERT_EQ(auth::verify_simple(bytes, b) == Verdict::Accept, a == b);
  }
}
