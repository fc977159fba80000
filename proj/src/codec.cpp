#include "ospfsec/codec.hpp"

#include <algorithm>
#include <set>

namespace ospfsec::codec {
namespace {

void put16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint16_t get16(ByteView b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t get32(ByteView b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::size_t body_size(const PacketBody& body) {
  if (const auto* h = std::get_if<HelloBody>(&body)) {
    return kHelloFixedSize + 4 * h->neighbors.size();
  }
  return std::get<OpaqueLsuBody>(body).payload.size();
}

// Sum of 16-bit big-endian words, skipping the checksum word and the auth field.
std::uint32_t folded_sum(ByteView bytes, bool include_checksum) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    if (i >= kAuthFieldOffset && i < kAuthFieldOffset + kAuthFieldSize) continue;
    if (i == kChecksumOffset && !include_checksum) continue;
    std::uint16_t word = static_cast<std::uint16_t>(bytes[i] << 8);
    if (i + 1 < bytes.size()) word |= bytes[i + 1];
    sum += word;
    sum = (sum & 0xFFFF) + (sum >> 16);
  }
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return sum;
}

bool hello_fields_valid(const HelloBody& h) {
  if (h.dead_interval <= h.hello_interval) return false;
  std::set<RouterId> seen(h.neighbors.begin(), h.neighbors.end());
  return seen.size() == h.neighbors.size();
}

}  // namespace

AuthField CryptoAuthField::pack() const {
  return AuthField{static_cast<std::uint8_t>(reserved >> 8),
                   static_cast<std::uint8_t>(reserved),
                   key_id,
                   auth_data_length,
                   static_cast<std::uint8_t>(crypto_sequence >> 24),
                   static_cast<std::uint8_t>(crypto_sequence >> 16),
                   static_cast<std::uint8_t>(crypto_sequence >> 8),
                   static_cast<std::uint8_t>(crypto_sequence)};
}

CryptoAuthField CryptoAuthField::unpack(const AuthField& f) {
  CryptoAuthField out;
  out.reserved = static_cast<std::uint16_t>((f[0] << 8) | f[1]);
  out.key_id = f[2];
  out.auth_data_length = f[3];
  out.crypto_sequence = get32(f, 4);
  return out;
}

Bytes Frame::wire() const {
  Bytes out = packet_bytes;
  if (digest) out.insert(out.end(), digest->begin(), digest->end());
  return out;
}

std::string_view to_string(CodecError e) {
  switch (e) {
    case CodecError::Truncated: return "Truncated";
    case CodecError::BadVersion: return "BadVersion";
    case CodecError::UnknownType: return "UnknownType";
    case CodecError::LengthMismatch: return "LengthMismatch";
    case CodecError::BodyTooLarge: return "BodyTooLarge";
    case CodecError::InvalidField: return "InvalidField";
  }
  return "Unknown";
}

void seal(OspfPacket& packet) {
  auto bytes = serialize(packet);
  if (!bytes) return;
  packet.header.packet_length = static_cast<std::uint16_t>(bytes->size());
  packet.header.checksum = get16(*bytes, kChecksumOffset);
}

Expected<Bytes, CodecError> serialize(const OspfPacket& p) {
  const PacketHeader& h = p.header;
  if (h.version != kVersion) return unexpected(CodecError::BadVersion);
  if (h.type != PacketType::Hello && h.type != PacketType::LsUpdate) {
    return unexpected(CodecError::UnknownType);
  }
  const bool hello_type = h.type == PacketType::Hello;
  if (hello_type != p.is_hello()) return unexpected(CodecError::InvalidField);
  if (h.au_type != AuType::Null && h.au_type != AuType::Simple &&
      h.au_type != AuType::Cryptographic) {
    return unexpected(CodecError::InvalidField);
  }
  if (const auto* hello = p.hello(); hello && !hello_fields_valid(*hello)) {
    return unexpected(CodecError::InvalidField);
  }

  const std::size_t total = kHeaderSize + body_size(p.body);
  if (total > kMaxPacketSize) return unexpected(CodecError::BodyTooLarge);

  Bytes out;
  out.reserve(total);
  out.push_back(h.version);
  out.push_back(static_cast<std::uint8_t>(h.type));
  put16(out, static_cast<std::uint16_t>(total));
  put32(out, h.router_id.value);
  put32(out, h.area_id.value);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(h.au_type));
  out.insert(out.end(), h.auth.begin(), h.auth.end());

  if (const auto* hello = p.hello()) {
    put32(out, hello->network_mask);
    put16(out, hello->hello_interval);
    out.push_back(hello->options);
    out.push_back(hello->router_priority);
    put32(out, hello->dead_interval);
    put32(out, hello->designated_router.value);
    put32(out, hello->backup_designated_router.value);
    for (RouterId n : hello->neighbors) put32(out, n.value);
  } else {
    const auto& payload = std::get<OpaqueLsuBody>(p.body).payload;
    out.insert(out.end(), payload.begin(), payload.end());
  }

  if (h.au_type != AuType::Cryptographic) {
    const std::uint16_t sum = compute_checksum(out);
    out[kChecksumOffset] = static_cast<std::uint8_t>(sum >> 8);
    out[kChecksumOffset + 1] = static_cast<std::uint8_t>(sum);
  }
  return out;
}

Expected<Frame, CodecError> encode(const OspfPacket& packet) {
  const bool crypto = packet.header.au_type == AuType::Cryptographic;
  if (crypto != packet.digest.has_value()) return unexpected(CodecError::InvalidField);
  auto bytes = serialize(packet);
  if (!bytes) return unexpected(bytes.error());
  return Frame{std::move(*bytes), packet.digest};
}

Expected<Frame, CodecError> split_wire(ByteView wire) {
  if (wire.size() < kHeaderSize) return unexpected(CodecError::Truncated);
  if (wire[0] != kVersion) return unexpected(CodecError::BadVersion);
  const std::size_t length = get16(wire, 2);
  if (length < kHeaderSize) return unexpected(CodecError::LengthMismatch);
  if (wire.size() < length) return unexpected(CodecError::Truncated);

  const std::uint16_t au = get16(wire, 14);
  const std::size_t trailer = au == static_cast<std::uint16_t>(AuType::Cryptographic) ? kDigestSize : 0;
  if (wire.size() - length < trailer) return unexpected(CodecError::Truncated);
  if (wire.size() - length != trailer) return unexpected(CodecError::LengthMismatch);

  Frame frame;
  frame.packet_bytes.assign(wire.begin(), wire.begin() + static_cast<std::ptrdiff_t>(length));
  if (trailer) {
    Digest d;
    std::copy(wire.begin() + static_cast<std::ptrdiff_t>(length), wire.end(), d.begin());
    frame.digest = d;
  }
  return frame;
}

Expected<OspfPacket, CodecError> decode(ByteView wire) {
  auto split = split_wire(wire);
  if (!split) return unexpected(split.error());
  const Bytes& b = split->packet_bytes;

  OspfPacket p;
  PacketHeader& h = p.header;
  h.version = b[0];
  const std::uint8_t type = b[1];
  if (type != static_cast<std::uint8_t>(PacketType::Hello) &&
      type != static_cast<std::uint8_t>(PacketType::LsUpdate)) {
    return unexpected(CodecError::UnknownType);
  }
  h.type = static_cast<PacketType>(type);
  h.packet_length = get16(b, 2);
  h.router_id = RouterId{get32(b, 4)};
  h.area_id = RouterId{get32(b, 8)};
  h.checksum = get16(b, kChecksumOffset);
  const std::uint16_t au = get16(b, 14);
  if (au > static_cast<std::uint16_t>(AuType::Cryptographic)) {
    return unexpected(CodecError::InvalidField);
  }
  h.au_type = static_cast<AuType>(au);
  std::copy_n(b.begin() + kAuthFieldOffset, kAuthFieldSize, h.auth.begin());

  if (h.type == PacketType::Hello) {
    const std::size_t body = b.size() - kHeaderSize;
    if (body < kHelloFixedSize || (body - kHelloFixedSize) % 4 != 0) {
      return unexpected(CodecError::LengthMismatch);
    }
    HelloBody hello;
    hello.network_mask = get32(b, 24);
    hello.hello_interval = get16(b, 28);
    hello.options = b[30];
    hello.router_priority = b[31];
    hello.dead_interval = get32(b, 32);
    hello.designated_router = RouterId{get32(b, 36)};
    hello.backup_designated_router = RouterId{get32(b, 40)};
    for (std::size_t off = kHeaderSize + kHelloFixedSize; off < b.size(); off += 4) {
      hello.neighbors.push_back(RouterId{get32(b, off)});
    }
    p.body = std::move(hello);
  } else {
    p.body = OpaqueLsuBody{Bytes(b.begin() + kHeaderSize, b.end())};
  }
  p.digest = split->digest;
  return p;
}

Expected<OspfPacket, CodecError> decode(const Frame& frame) { return decode(frame.wire()); }

std::uint16_t compute_checksum(ByteView packet_bytes) {
  return static_cast<std::uint16_t>(~folded_sum(packet_bytes, false));
}

bool checksum_valid(ByteView packet_bytes) {
  if (packet_bytes.size() < kHeaderSize) return false;
  return folded_sum(packet_bytes, true) == 0xFFFF;
}

AuType peek_au_type(ByteView b) { return static_cast<AuType>(get16(b, 14)); }

RouterId peek_router_id(ByteView b) { return RouterId{get32(b, 4)}; }

AuthField peek_auth_field(ByteView b) {
  AuthField f;
  std::copy_n(b.begin() + kAuthFieldOffset, kAuthFieldSize, f.begin());
  return f;
}

}  // namespace ospfsec::codec
