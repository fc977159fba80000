#pragma once

// OSPFv2 wire format for the subset the simulator speaks: the 24-byte common
// header, Hello bodies, opaque Link State Update bodies, and the 16-byte
// keyed-MD5 trailer that follows the packet on the wire.
//
//   0       version | type | packet length
//   4       router id
//   8       area id
//   12      checksum | au type
//   16..23  authentication field (8 bytes)
//   24..    body
//
// All multi-byte fields are big-endian.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "ospfsec/expected.hpp"
#include "ospfsec/types.hpp"

namespace ospfsec::codec {

inline constexpr std::uint8_t kVersion = 2;
inline constexpr std::size_t kHeaderSize = 24;
inline constexpr std::size_t kHelloFixedSize = 20;
inline constexpr std::size_t kAuthFieldOffset = 16;
inline constexpr std::size_t kAuthFieldSize = 8;
inline constexpr std::size_t kChecksumOffset = 12;
inline constexpr std::size_t kDigestSize = 16;
inline constexpr std::size_t kMaxPacketSize = 65535;

enum class PacketType : std::uint8_t { Hello = 1, LsUpdate = 4 };
enum class AuType : std::uint16_t { Null = 0, Simple = 1, Cryptographic = 2 };

using AuthField = std::array<std::uint8_t, kAuthFieldSize>;
using Digest = std::array<std::uint8_t, kDigestSize>;

// Interpretation of the 8-byte auth field when au_type == Cryptographic.
struct CryptoAuthField {
  std::uint16_t reserved{0};
  std::uint8_t key_id{0};
  std::uint8_t auth_data_length{kDigestSize};
  std::uint32_t crypto_sequence{0};

  AuthField pack() const;
  static CryptoAuthField unpack(const AuthField& field);

  bool operator==(const CryptoAuthField&) const = default;
};

struct PacketHeader {
  std::uint8_t version{kVersion};
  PacketType type{PacketType::Hello};
  std::uint16_t packet_length{0};
  RouterId router_id;
  RouterId area_id;
  std::uint16_t checksum{0};
  AuType au_type{AuType::Null};
  AuthField auth{};

  bool operator==(const PacketHeader&) const = default;
};

struct HelloBody {
  std::uint32_t network_mask{0xFFFFFF00};
  std::uint16_t hello_interval{10};
  std::uint8_t options{0x02};
  std::uint8_t router_priority{1};
  std::uint32_t dead_interval{40};
  RouterId designated_router;
  RouterId backup_designated_router;
  std::vector<RouterId> neighbors;

  bool operator==(const HelloBody&) const = default;
};

struct OpaqueLsuBody {
  Bytes payload;

  bool operator==(const OpaqueLsuBody&) const = default;
};

using PacketBody = std::variant<HelloBody, OpaqueLsuBody>;

// A decoded OSPF message. `digest` is the trailer carried after the packet
// when au_type == Cryptographic.
struct OspfPacket {
  PacketHeader header;
  PacketBody body;
  std::optional<Digest> digest;

  bool is_hello() const { return std::holds_alternative<HelloBody>(body); }
  const HelloBody* hello() const { return std::get_if<HelloBody>(&body); }

  bool operator==(const OspfPacket&) const = default;
};

// Bytes on the wire: packet_bytes (exactly packet_length long) followed by the
// digest when present.
struct Frame {
  Bytes packet_bytes;
  std::optional<Digest> digest;

  Bytes wire() const;
  bool operator==(const Frame&) const = default;
};

enum class CodecError {
  Truncated,
  BadVersion,
  UnknownType,
  LengthMismatch,
  BodyTooLarge,
  InvalidField,
};

std::string_view to_string(CodecError e);

// Populates packet_length and checksum the way encode() will write them.
void seal(OspfPacket& packet);

// Packet bytes only (no trailer), with length and checksum populated.
Expected<Bytes, CodecError> serialize(const OspfPacket& packet);

Expected<Frame, CodecError> encode(const OspfPacket& packet);

// Total over arbitrary input.
Expected<OspfPacket, CodecError> decode(ByteView wire);
Expected<OspfPacket, CodecError> decode(const Frame& frame);

// Splits wire bytes into packet bytes and digest using the header's length
// and au_type. Performs only the checks needed to split.
Expected<Frame, CodecError> split_wire(ByteView wire);

// One's-complement checksum with the checksum and auth fields taken as zero.
std::uint16_t compute_checksum(ByteView packet_bytes);

// True when the one's-complement sum over the packet (auth field zeroed,
// stored checksum included) is 0xFFFF.
bool checksum_valid(ByteView packet_bytes);

// Header accessors on raw bytes; callers must ensure size >= kHeaderSize.
AuType peek_au_type(ByteView packet_bytes);
RouterId peek_router_id(ByteView packet_bytes);
AuthField peek_auth_field(ByteView packet_bytes);

}  // namespace ospfsec::codec
