#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ospfsec/codec.hpp"
#include "ospfsec/expected.hpp"
#include "ospfsec/types.hpp"
#include "ospfsec/verdict.hpp"

namespace ospfsec::auth {

inline constexpr std::size_t kSimplePasswordSize = 8;
inline constexpr std::size_t kMd5SecretSize = 16;
inline constexpr std::size_t kDisorderThreshold = 3;
inline constexpr Seconds kDisorderWindow{10};

using SimplePassword = std::array<std::uint8_t, kSimplePasswordSize>;

struct AuthKey {
  std::uint8_t key_id{0};
  Bytes secret;
  WallSeconds valid_from;
  WallSeconds valid_until;
};

struct KeyChain {
  std::vector<AuthKey> keys;
  Seconds max_time_drift{0};

  const AuthKey* find(std::uint8_t key_id) const;
};

struct NoAuth {};
struct SimpleAuth {
  SimplePassword password{};
};
struct CryptoAuth {
  KeyChain chain;
};

struct AuthConfig {
  std::variant<NoAuth, SimpleAuth, CryptoAuth> mode;

  codec::AuType au_type() const;
  std::string_view mode_name() const;
};

// Config-load helpers. Warnings are appended for recoverable problems.
Expected<SimplePassword, std::string> make_simple_password(std::string_view password,
                                                           std::vector<std::string>& warnings);
Expected<KeyChain, std::string> make_key_chain(std::vector<AuthKey> keys, Seconds max_time_drift);

// The digest primitive: MD5 over the given bytes.
codec::Digest md5(ByteView data);

// MD5(packet_bytes || secret zero-padded to 16 bytes).
codec::Digest keyed_digest(ByteView packet_bytes, ByteView secret);

// Null authentication: zero auth field.
codec::OspfPacket sign_none(codec::OspfPacket packet);
codec::OspfPacket sign_simple(codec::OspfPacket packet, const SimplePassword& password);
codec::Frame sign_md5(codec::OspfPacket packet, const AuthKey& key, std::uint32_t sequence);

Verdict verify_none(ByteView packet_bytes);
Verdict verify_simple(ByteView packet_bytes, const SimplePassword& password);
Verdict verify_md5(const codec::Frame& frame, const KeyChain& chain, Timestamp now);

enum class KeyError { NoValidKey };

// Most recent key whose [valid_from, valid_until) contains now; ties go to the
// highest key id. No drift slack on the sending side.
Expected<const AuthKey*, KeyError> select_send_key(const KeyChain& chain, Timestamp now);

// Receive window for a key: [valid_from - drift, valid_until + drift].
bool key_receivable(const AuthKey& key, Seconds drift, Timestamp now);

// Digest / password / checksum check for a received frame against the
// receiver's config. Sequence admission is separate (see SeqState).
Verdict verify_frame(const AuthConfig& config, const codec::Frame& frame, Timestamp now);

enum class SeqVerdict { Accept, Replay, Disorder };

// Per-neighbor cryptographic sequence tracking, one counter per key id.
struct SeqState {
  std::map<std::uint8_t, std::uint32_t> last_accepted;
  std::deque<Timestamp> disorder_times;

  std::size_t anomaly_count() const { return disorder_times.size(); }
  std::optional<Timestamp> anomaly_window_start() const;
  bool teardown_due() const { return anomaly_count() >= kDisorderThreshold; }
  void reset() { *this = SeqState{}; }
};

SeqVerdict check_sequence(SeqState& state, std::uint8_t key_id, std::uint32_t received, Timestamp now);

Verdict to_verdict(SeqVerdict v);

}  // namespace ospfsec::auth
