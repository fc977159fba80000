#pragma once

// Hello-driven adjacency state machine. The database exchange states are
// collapsed: a neighbor goes Down -> Init on first valid Hello and
// Init -> TwoWay -> Full once it lists us. Every received frame passes the
// authentication gate first; a rejected frame has no effect on any record.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ospfsec/auth.hpp"
#include "ospfsec/codec.hpp"
#include "ospfsec/types.hpp"
#include "ospfsec/verdict.hpp"

namespace ospfsec::fsm {

enum class NeighborState { Down, Init, TwoWay, Full };

std::string_view to_string(NeighborState s);

struct Prefix {
  std::uint32_t address{0};
  std::uint32_t mask{0};

  bool operator==(const Prefix&) const = default;
};

struct RouterConfig {
  RouterId router_id;
  RouterId area_id;
  Seconds hello_interval{10};
  Seconds dead_interval{40};
  std::uint8_t priority{1};
  auth::AuthConfig auth;
  std::vector<Prefix> advertised_networks;
};

struct NeighborRecord {
  RouterId neighbor_id;
  std::string link_id;
  NeighborState state{NeighborState::Down};
  Timestamp last_heard;
  Timestamp inactivity_deadline;
  auth::SeqState seq_state;
  bool teardown_pending{false};
};

struct StateChange {
  RouterId neighbor;
  NeighborState from;
  NeighborState to;
};
struct SendHello {
  std::string link_id;
};
struct SendLsu {
  std::string link_id;
};
struct Drop {
  Verdict reason;
};
struct Teardown {
  RouterId neighbor;
};

using Effect = std::variant<StateChange, SendHello, SendLsu, Drop, Teardown>;

struct ReceiveResult {
  Verdict verdict{Verdict::Malformed};
  std::optional<RouterId> sender;
  std::vector<Effect> effects;
};

struct LinkAttachment {
  std::string link_id;
  std::uint32_t network_mask{0xFFFFFF00};
};

class Router {
 public:
  // `first_hello` is in the router's local clock.
  Router(RouterConfig config, std::vector<LinkAttachment> links, Timestamp first_hello);

  ReceiveResult on_receive(ByteView wire, const std::string& link_id, Timestamp now);
  std::vector<Effect> on_tick(Timestamp now);

  // Signed frame ready for transmission, or nullopt when no key may send now.
  std::optional<codec::Frame> build_hello(const std::string& link_id, Timestamp now);
  std::optional<codec::Frame> build_lsu(const std::string& link_id, Timestamp now);

  // Earliest local time at which on_tick has work to do.
  Timestamp next_wakeup() const;

  const RouterConfig& config() const { return config_; }
  RouterId id() const { return config_.router_id; }
  const std::map<RouterId, NeighborRecord>& neighbors() const { return neighbors_; }
  const std::vector<LinkAttachment>& links() const { return links_; }
  std::uint32_t crypto_sequence() const { return crypto_sequence_; }
  std::size_t unsigned_sends() const { return unsigned_sends_; }

 private:
  std::optional<codec::Frame> finish(codec::OspfPacket packet, Timestamp now);
  void set_state(NeighborRecord& rec, NeighborState to, std::vector<Effect>& effects);
  bool has_full_neighbor(const std::string& link_id) const;

  RouterConfig config_;
  std::vector<LinkAttachment> links_;
  std::map<RouterId, NeighborRecord> neighbors_;
  Timestamp next_hello_;
  Timestamp next_lsu_;
  std::uint32_t crypto_sequence_{0};
  std::uint32_t lsu_sequence_{0};
  std::size_t unsigned_sends_{0};
};

}  // namespace ospfsec::fsm
