#include "ospfsec/auth.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ospfsec::auth {

using codec::AuType;
using codec::CryptoAuthField;
using codec::Digest;
using codec::Frame;
using codec::OspfPacket;

const AuthKey* KeyChain::find(std::uint8_t key_id) const {
  auto it = std::find_if(keys.begin(), keys.end(), [&](const AuthKey& k) { return k.key_id == key_id; });
  return it == keys.end() ? nullptr : &*it;
}

codec::AuType AuthConfig::au_type() const {
  switch (mode.index()) {
    case 0: return AuType::Null;
    case 1: return AuType::Simple;
    default: return AuType::Cryptographic;
  }
}

std::string_view AuthConfig::mode_name() const {
  switch (mode.index()) {
    case 0: return "none";
    case 1: return "simple";
    default: return "cryptographic";
  }
}

Expected<SimplePassword, std::string> make_simple_password(std::string_view password,
                                                           std::vector<std::string>& warnings) {
  if (password.empty()) return unexpected(std::string("simple password must not be empty"));
  if (password.size() > kSimplePasswordSize) {
    warnings.push_back("simple password \"" + std::string(password) + "\" exceeds 8 bytes; truncated to \"" +
                       std::string(password.substr(0, kSimplePasswordSize)) + "\"");
    password = password.substr(0, kSimplePasswordSize);
  }
  SimplePassword out{};
  std::copy(password.begin(), password.end(), out.begin());
  return out;
}

Expected<KeyChain, std::string> make_key_chain(std::vector<AuthKey> keys, Seconds max_time_drift) {
  if (max_time_drift < Seconds{0}) return unexpected(std::string("max_time_drift must be >= 0"));
  if (keys.empty()) return unexpected(std::string("key chain must contain at least one key"));
  std::set<std::uint8_t> ids;
  for (const AuthKey& k : keys) {
    if (k.secret.empty() || k.secret.size() > kMd5SecretSize) {
      return unexpected("key " + std::to_string(k.key_id) + ": secret must be 1..16 bytes");
    }
    if (k.valid_from >= k.valid_until) {
      return unexpected("key " + std::to_string(k.key_id) + ": valid_from must precede valid_until");
    }
    if (!ids.insert(k.key_id).second) {
      return unexpected("duplicate key_id " + std::to_string(k.key_id));
    }
  }
  return KeyChain{std::move(keys), max_time_drift};
}

Digest md5(ByteView data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_md5(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("EVP_Digest(md5) failed");
  }
  return out;
}

Digest keyed_digest(ByteView packet_bytes, ByteView secret) {
  Bytes input(packet_bytes.begin(), packet_bytes.end());
  std::array<std::uint8_t, kMd5SecretSize> padded{};
  std::copy_n(secret.begin(), std::min(secret.size(), padded.size()), padded.begin());
  input.insert(input.end(), padded.begin(), padded.end());
  return md5(input);
}

OspfPacket sign_none(OspfPacket packet) {
  packet.header.au_type = AuType::Null;
  packet.header.auth = {};
  packet.digest.reset();
  codec::seal(packet);
  return packet;
}

OspfPacket sign_simple(OspfPacket packet, const SimplePassword& password) {
  packet.header.au_type = AuType::Simple;
  packet.header.auth = password;
  packet.digest.reset();
  codec::seal(packet);
  return packet;
}

Frame sign_md5(OspfPacket packet, const AuthKey& key, std::uint32_t sequence) {
  packet.header.au_type = AuType::Cryptographic;
  packet.header.auth = CryptoAuthField{0, key.key_id, codec::kDigestSize, sequence}.pack();
  packet.digest.reset();
  auto bytes = codec::serialize(packet);
  if (!bytes) throw std::invalid_argument("sign_md5: packet violates codec invariants");
  Frame frame{std::move(*bytes), std::nullopt};
  frame.digest = keyed_digest(frame.packet_bytes, key.secret);
  return frame;
}

Verdict verify_none(ByteView packet_bytes) {
  if (packet_bytes.size() < codec::kHeaderSize) return Verdict::Malformed;
  if (codec::peek_au_type(packet_bytes) != AuType::Null) return Verdict::AuthTypeMismatch;
  return codec::checksum_valid(packet_bytes) ? Verdict::Accept : Verdict::BadChecksum;
}

Verdict verify_simple(ByteView packet_bytes, const SimplePassword& password) {
  if (packet_bytes.size() < codec::kHeaderSize) return Verdict::Malformed;
  if (codec::peek_au_type(packet_bytes) != AuType::Simple) return Verdict::AuthTypeMismatch;
  if (!codec::checksum_valid(packet_bytes)) return Verdict::BadChecksum;
  return codec::peek_auth_field(packet_bytes) == password ? Verdict::Accept : Verdict::PasswordMismatch;
}

bool key_receivable(const AuthKey& key, Seconds drift, Timestamp now) {
  return now >= key.valid_from - drift && now <= key.valid_until + drift;
}

Verdict verify_md5(const Frame& frame, const KeyChain& chain, Timestamp now) {
  const ByteView bytes = frame.packet_bytes;
  if (bytes.size() < codec::kHeaderSize) return Verdict::Malformed;
  if (codec::peek_au_type(bytes) != AuType::Cryptographic) return Verdict::AuthTypeMismatch;
  if (!frame.digest) return Verdict::Malformed;
  const auto field = CryptoAuthField::unpack(codec::peek_auth_field(bytes));
  if (field.auth_data_length != codec::kDigestSize) return Verdict::Malformed;

  const AuthKey* key = chain.find(field.key_id);
  if (!key) return Verdict::UnknownKeyId;
  if (!key_receivable(*key, chain.max_time_drift, now)) return Verdict::KeyExpired;
  return keyed_digest(bytes, key->secret) == *frame.digest ? Verdict::Accept : Verdict::DigestMismatch;
}

Expected<const AuthKey*, KeyError> select_send_key(const KeyChain& chain, Timestamp now) {
  const AuthKey* best = nullptr;
  for (const AuthKey& k : chain.keys) {
    if (!(k.valid_from <= now && now < k.valid_until)) continue;
    if (!best || k.valid_from > best->valid_from ||
        (k.valid_from == best->valid_from && k.key_id > best->key_id)) {
      best = &k;
    }
  }
  if (!best) return unexpected(KeyError::NoValidKey);
  return best;
}

Verdict verify_frame(const AuthConfig& config, const Frame& frame, Timestamp now) {
  return std::visit(
      [&](const auto& mode) -> Verdict {
        using M = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<M, NoAuth>) {
          return frame.digest ? Verdict::AuthTypeMismatch : verify_none(frame.packet_bytes);
        } else if constexpr (std::is_same_v<M, SimpleAuth>) {
          return frame.digest ? Verdict::AuthTypeMismatch : verify_simple(frame.packet_bytes, mode.password);
        } else {
          return verify_md5(frame, mode.chain, now);
        }
      },
      config.mode);
}

std::optional<Timestamp> SeqState::anomaly_window_start() const {
  if (disorder_times.empty()) return std::nullopt;
  return disorder_times.front();
}

SeqVerdict check_sequence(SeqState& state, std::uint8_t key_id, std::uint32_t received, Timestamp now) {
  auto it = state.last_accepted.find(key_id);
  if (it == state.last_accepted.end() || received > it->second) {
    state.last_accepted[key_id] = received;
    return SeqVerdict::Accept;
  }
  if (received == it->second) return SeqVerdict::Replay;

  while (!state.disorder_times.empty() && now - state.disorder_times.front() > kDisorderWindow) {
    state.disorder_times.pop_front();
  }
  state.disorder_times.push_back(now);
  return SeqVerdict::Disorder;
}

Verdict to_verdict(SeqVerdict v) {
  switch (v) {
    case SeqVerdict::Accept: return Verdict::Accept;
    case SeqVerdict::Replay: return Verdict::Replay;
    case SeqVerdict::Disorder: return Verdict::Disorder;
  }
  return Verdict::Malformed;
}

}  // namespace ospfsec::auth
