#pragma once

// Deterministic discrete-event simulation of OSPF routers on shared links.
//
// Every router transmission is recorded as a Tx capture record, then fanned
// out to the other link endpoints after the link latency. An interposer
// attached to a link sees each transmission first and decides what is
// delivered. On arrival a frame passes the router's guard, then waits in a
// bounded input queue served at processing_budget_pps, and is finally handed
// to the neighbor state machine; the resulting verdict is recorded as an Rx
// record. Events with equal timestamps run in insertion order.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ospfsec/expected.hpp"
#include "ospfsec/guard.hpp"
#include "ospfsec/neighbor.hpp"
#include "ospfsec/types.hpp"

namespace ospfsec::sim {

enum class CaptureEvent { Tx, Rx, Drop };
enum class Origin { Router, Adversary };

std::string_view to_string(CaptureEvent e);
std::string_view to_string(Origin o);

inline constexpr std::string_view kSentVerdict = "Sent";
inline constexpr std::string_view kDeletedVerdict = "Deleted";

struct CaptureRecord {
  Timestamp time;  // global clock
  CaptureEvent event{CaptureEvent::Tx};
  std::string link_id;
  RouterId src;  // transmitting node
  std::optional<RouterId> dst;
  Origin origin{Origin::Router};
  Bytes frame;  // wire bytes, digest trailer included
  std::string verdict;
  std::optional<std::size_t> cause;  // Tx record an Rx/Drop derives from

  bool operator==(const CaptureRecord&) const = default;
};

struct StateTransition {
  Timestamp time;  // global clock
  RouterId router;
  RouterId neighbor;
  fsm::NeighborState from;
  fsm::NeighborState to;
  bool teardown{false};
};

struct RouterSpec {
  fsm::RouterConfig config;
  Seconds skew{0};
};

struct LinkSpec {
  std::string id;
  std::vector<RouterId> routers;
  Micros latency{1000};
  std::uint32_t network_mask{0xFFFFFF00};
};

struct WorldConfig {
  WallSeconds start_time;
  std::vector<RouterSpec> routers;
  std::vector<LinkSpec> links;
  ids::GuardConfig guard;
  std::uint32_t processing_budget_pps{500};
  std::size_t input_queue_capacity{500};
  std::uint64_t seed{0};
};

// A frame in flight on a link, as seen by an interposer.
struct Transit {
  std::size_t tx_index;
  std::string link_id;
  RouterId sender;
  Bytes wire;
  Timestamp time;
};

// Services the world offers to an interposer on one link.
class LinkTap {
 public:
  virtual ~LinkTap() = default;

  virtual Timestamp now() const = 0;
  virtual WallSeconds start_time() const = 0;
  virtual const std::string& link_id() const = 0;
  virtual const std::vector<RouterId>& endpoints() const = 0;
  virtual RouterId node_id() const = 0;
  virtual std::mt19937_64& rng() = 0;

  // Deliver the frame unchanged to every other endpoint.
  virtual void forward(const Transit& t, Micros extra_delay = Micros{0}) = 0;
  // Discard the frame; recorded as a Drop.
  virtual void drop(const Transit& t) = 0;
  // Transmit adversary-originated bytes after `delay`; nullopt dst = every endpoint.
  virtual void originate(Bytes wire, std::optional<RouterId> dst, Micros delay = Micros{0},
                         std::optional<std::size_t> cause = std::nullopt) = 0;
  virtual void schedule(Timestamp at, std::size_t action) = 0;
};

class Interposer {
 public:
  virtual ~Interposer() = default;
  virtual void on_attach(LinkTap&) {}
  virtual void on_transmit(const Transit& t, LinkTap& tap) = 0;
  virtual void on_action(std::size_t, LinkTap&) {}
};

struct ConfigError {
  std::string message;
};

class World {
 public:
  static Expected<std::unique_ptr<World>, ConfigError> create(WorldConfig config);
  ~World();

  // The adversary node id is the origin attributed to frames the hook creates.
  Expected<bool, ConfigError> attach_interposer(const std::string& link_id,
                                                std::shared_ptr<Interposer> hook, RouterId adversary_id);

  // Processes events with time <= start + until.
  void run(Micros until);

  Timestamp global_time() const { return now_; }
  Timestamp local_time(RouterId router) const;

  const std::vector<CaptureRecord>& capture() const { return capture_; }
  const std::vector<StateTransition>& timeline() const { return timeline_; }
  std::map<std::pair<RouterId, RouterId>, fsm::NeighborState> adjacency_matrix() const;
  const fsm::Router* router(RouterId id) const;
  const ids::Guard* guard(RouterId id) const;
  const WorldConfig& config() const { return config_; }

 private:
  struct Node;
  struct LinkState;
  class Tap;

  struct Deliver {
    std::string link_id;
    RouterId dst;
    RouterId src;
    Origin origin;
    Bytes wire;
    std::size_t tx_index;
  };
  struct Process {
    Deliver frame;
  };
  struct Tick {
    RouterId router;
  };
  struct AdversaryAction {
    std::string link_id;
    std::size_t index;
  };
  struct AdversaryTransmit {
    std::string link_id;
    Bytes wire;
    std::optional<RouterId> dst;
    std::optional<std::size_t> cause;
  };
  using EventKind = std::variant<Deliver, Process, Tick, AdversaryAction, AdversaryTransmit>;

  struct Event {
    Timestamp time;
    std::uint64_t order;
    EventKind kind;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
  };

  explicit World(WorldConfig config);

  void push(Timestamp at, EventKind kind);
  void schedule_tick(Node& node);
  void tick(Node& node);
  void transmit(Node& node, const std::string& link_id, const codec::Frame& frame);
  void fan_out(const LinkState& link, RouterId src, Origin origin, const Bytes& wire, std::size_t tx_index,
               Micros extra_delay, std::optional<RouterId> only);
  void adversary_transmit(const AdversaryTransmit& t);
  void handle(Deliver& d);
  void handle(Process& p);
  void handle(Tick& t);
  void handle(AdversaryAction& a);
  void handle(AdversaryTransmit& t);
  void apply_effects(Node& node, const std::vector<fsm::Effect>& effects);
  std::size_t record(CaptureRecord rec);

  WorldConfig config_;
  Timestamp start_;
  Timestamp now_;
  std::uint64_t next_order_{0};
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::map<RouterId, std::unique_ptr<Node>> nodes_;
  std::map<std::string, std::unique_ptr<LinkState>> links_;
  std::vector<CaptureRecord> capture_;
  std::vector<StateTransition> timeline_;
  std::mt19937_64 rng_;
  Micros service_time_;
};

}  // namespace ospfsec::sim
