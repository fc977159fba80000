#pragma once

// Hand-rolled generators for property tests. Everything is driven by an
// explicit mt19937_64 so failures reproduce from the printed seed.

#include <algorithm>
#include <random>
#include <set>

#include "ospfsec/auth.hpp"
#include "ospfsec/codec.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::uint32_t u32(Rng& r) { return static_cast<std::uint32_t>(r()); }
inline std::size_t below(Rng& r, std::size_t n) { return static_cast<std::size_t>(r() % n); }

inline ospfsec::Bytes bytes(Rng& r, std::size_t n) {
  ospfsec::Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(r());
  return b;
}

inline ospfsec::codec::HelloBody hello_body(Rng& r) {
  ospfsec::codec::HelloBody h;
  h.network_mask = u32(r);
  h.hello_interval = static_cast<std::uint16_t>(1 + below(r, 300));
  h.options = static_cast<std::uint8_t>(r());
  h.router_priority = static_cast<std::uint8_t>(r());
  h.dead_interval = h.hello_interval + 1 + static_cast<std::uint32_t>(below(r, 1000));
  h.designated_router = ospfsec::RouterId{u32(r)};
  h.backup_designated_router = ospfsec::RouterId{u32(r)};
  std::set<std::uint32_t> seen;
  const std::size_t n = below(r, 12);
  while (h.neighbors.size() < n) {
    const auto id = u32(r);
    if (seen.insert(id).second) h.neighbors.push_back(ospfsec::RouterId{id});
  }
  return h;
}

// A valid packet under the given auth type. For Null/Simple the length and
// checksum are sealed; for Cryptographic the auth field and digest are random.
inline ospfsec::codec::OspfPacket packet(Rng& r, ospfsec::codec::AuType au) {
  using namespace ospfsec::codec;
  OspfPacket p;
  const bool hello = r() % 2 == 0;
  p.header.type = hello ? PacketType::Hello : PacketType::LsUpdate;
  p.header.router_id = ospfsec::RouterId{u32(r)};
  p.header.area_id = ospfsec::RouterId{u32(r)};
  p.header.au_type = au;
  if (hello) {
    p.body = hello_body(r);
  } else {
    p.body = OpaqueLsuBody{bytes(r, below(r, 200))};
  }
  if (au == AuType::Simple) {
    for (auto& b : p.header.auth) b = static_cast<std::uint8_t>(r());
  } else if (au == AuType::Cryptographic) {
    CryptoAuthField f;
    f.key_id = static_cast<std::uint8_t>(r());
    f.crypto_sequence = u32(r);
    p.header.auth = f.pack();
    Digest d;
    for (auto& b : d) b = static_cast<std::uint8_t>(r());
    p.digest = d;
  }
  seal(p);
  if (au == AuType::Cryptographic) p.header.checksum = 0;
  return p;
}

inline ospfsec::codec::AuType au_type(Rng& r) {
  return static_cast<ospfsec::codec::AuType>(below(r, 3));
}

// Unsigned packet ready for signing (no digest, zero auth field).
inline ospfsec::codec::OspfPacket bare_packet(Rng& r) {
  auto p = packet(r, ospfsec::codec::AuType::Null);
  p.header.checksum = 0;
  p.header.packet_length = 0;
  return p;
}

inline ospfsec::Bytes secret(Rng& r) {
  ospfsec::Bytes s = bytes(r, 1 + below(r, 16));
  for (auto& b : s) b = static_cast<std::uint8_t>(b == 0 ? 1 : b);
  return s;
}

}  // namespace gen
