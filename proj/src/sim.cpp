#include "ospfsec/sim.hpp"

#include <algorithm>

namespace ospfsec::sim {

std::string_view to_string(CaptureEvent e) {
  switch (e) {
    case CaptureEvent::Tx: return "tx";
    case CaptureEvent::Rx: return "rx";
    case CaptureEvent::Drop: return "drop";
  }
  return "unknown";
}

std::string_view to_string(Origin o) { return o == Origin::Router ? "router" : "adversary"; }

struct World::Node {
  fsm::Router router;
  Seconds skew;
  ids::Guard guard;
  Timestamp busy_until;
  std::size_t pending{0};
  std::set<Timestamp> ticks;
};

struct World::LinkState {
  LinkSpec spec;
  std::shared_ptr<Interposer> hook;
  RouterId adversary_id;
  std::unique_ptr<Tap> tap;
};

class World::Tap final : public LinkTap {
 public:
  Tap(World& world, LinkState& link) : world_(world), link_(link) {}

  Timestamp now() const override { return world_.now_; }
  WallSeconds start_time() const override { return world_.config_.start_time; }
  const std::string& link_id() const override { return link_.spec.id; }
  const std::vector<RouterId>& endpoints() const override { return link_.spec.routers; }
  RouterId node_id() const override { return link_.adversary_id; }
  std::mt19937_64& rng() override { return world_.rng_; }

  void forward(const Transit& t, Micros extra_delay) override {
    world_.fan_out(link_, t.sender, Origin::Router, t.wire, t.tx_index, extra_delay, std::nullopt);
  }

  void drop(const Transit& t) override {
    world_.record(CaptureRecord{world_.now_, CaptureEvent::Drop, link_.spec.id, t.sender, std::nullopt,
                                Origin::Router, t.wire, std::string(kDeletedVerdict), t.tx_index});
  }

  void originate(Bytes wire, std::optional<RouterId> dst, Micros delay,
                 std::optional<std::size_t> cause) override {
    AdversaryTransmit t{link_.spec.id, std::move(wire), dst, cause};
    if (delay <= Micros{0}) {
      world_.adversary_transmit(t);
    } else {
      world_.push(world_.now_ + delay, std::move(t));
    }
  }

  void schedule(Timestamp at, std::size_t action) override {
    world_.push(std::max(at, world_.now_), AdversaryAction{link_.spec.id, action});
  }

 private:
  World& world_;
  LinkState& link_;
};

World::World(WorldConfig config)
    : config_(std::move(config)),
      start_(Timestamp{config_.start_time}),
      now_(start_),
      rng_(config_.seed),
      service_time_(Micros{1'000'000 / std::max<std::uint32_t>(config_.processing_budget_pps, 1)}) {}

World::~World() = default;

Expected<std::unique_ptr<World>, ConfigError> World::create(WorldConfig config) {
  if (config.processing_budget_pps == 0) return unexpected(ConfigError{"processing_budget_pps must be > 0"});
  if (config.input_queue_capacity == 0) return unexpected(ConfigError{"input_queue_capacity must be > 0"});

  std::set<RouterId> ids;
  for (const auto& r : config.routers) {
    if (!ids.insert(r.config.router_id).second) {
      return unexpected(ConfigError{"duplicate router id " + r.config.router_id.str()});
    }
    if (r.config.hello_interval <= Seconds{0} || r.config.dead_interval <= r.config.hello_interval) {
      return unexpected(ConfigError{"router " + r.config.router_id.str() +
                                    ": need 0 < hello_interval < dead_interval"});
    }
  }
  std::set<std::string> link_ids;
  std::set<std::pair<RouterId, RouterId>> pairs;
  for (const auto& l : config.links) {
    if (!link_ids.insert(l.id).second) return unexpected(ConfigError{"duplicate link id " + l.id});
    if (l.routers.empty()) return unexpected(ConfigError{"link " + l.id + " has no endpoints"});
    if (l.latency < Micros{0}) return unexpected(ConfigError{"link " + l.id + ": negative latency"});
    for (RouterId r : l.routers) {
      if (!ids.count(r)) {
        return unexpected(ConfigError{"link " + l.id + " references unknown router " + r.str()});
      }
    }
    for (std::size_t i = 0; i < l.routers.size(); ++i) {
      for (std::size_t j = i + 1; j < l.routers.size(); ++j) {
        auto key = std::minmax(l.routers[i], l.routers[j]);
        if (key.first == key.second) {
          return unexpected(ConfigError{"link " + l.id + " lists router " + key.first.str() + " twice"});
        }
        if (!pairs.insert(key).second) {
          return unexpected(ConfigError{"routers " + key.first.str() + " and " + key.second.str() +
                                        " share more than one link"});
        }
      }
    }
  }

  std::unique_ptr<World> world(new World(std::move(config)));
  for (const auto& l : world->config_.links) {
    auto state = std::make_unique<LinkState>();
    state->spec = l;
    world->links_.emplace(l.id, std::move(state));
  }
  for (const auto& spec : world->config_.routers) {
    std::vector<fsm::LinkAttachment> attachments;
    for (const auto& l : world->config_.links) {
      if (std::find(l.routers.begin(), l.routers.end(), spec.config.router_id) != l.routers.end()) {
        attachments.push_back({l.id, l.network_mask});
      }
    }
    const auto hello_us = std::chrono::duration_cast<Micros>(spec.config.hello_interval).count();
    const Micros phase{static_cast<std::int64_t>(world->rng_() % static_cast<std::uint64_t>(hello_us))};
    const Timestamp first_local = world->start_ + phase + spec.skew;
    auto node = std::unique_ptr<Node>(new Node{fsm::Router(spec.config, std::move(attachments), first_local),
                                               spec.skew, ids::Guard(world->config_.guard), world->start_,
                                               0, {}});
    world->nodes_.emplace(spec.config.router_id, std::move(node));
  }
  for (auto& [id, node] : world->nodes_) world->schedule_tick(*node);
  return world;
}

Expected<bool, ConfigError> World::attach_interposer(const std::string& link_id,
                                                     std::shared_ptr<Interposer> hook,
                                                     RouterId adversary_id) {
  auto it = links_.find(link_id);
  if (it == links_.end()) return unexpected(ConfigError{"interposer on unknown link " + link_id});
  if (nodes_.count(adversary_id)) {
    return unexpected(ConfigError{"adversary id " + adversary_id.str() + " collides with a router"});
  }
  LinkState& link = *it->second;
  link.hook = std::move(hook);
  link.adversary_id = adversary_id;
  link.tap = std::make_unique<Tap>(*this, link);
  link.hook->on_attach(*link.tap);
  return true;
}

void World::push(Timestamp at, EventKind kind) { queue_.push(Event{at, next_order_++, std::move(kind)}); }

std::size_t World::record(CaptureRecord rec) {
  capture_.push_back(std::move(rec));
  return capture_.size() - 1;
}

Timestamp World::local_time(RouterId router) const {
  auto it = nodes_.find(router);
  return it == nodes_.end() ? now_ : now_ + it->second->skew;
}

void World::run(Micros until) {
  const Timestamp end = start_ + until;
  while (!queue_.empty() && queue_.top().time <= end) {
    // pop_heap never compares the moved-from top.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    now_ = ev.time;
    std::visit([this](auto& kind) { handle(kind); }, ev.kind);
  }
  now_ = std::max(now_, end);
}

void World::schedule_tick(Node& node) {
  Timestamp at = node.router.next_wakeup() - node.skew;
  at = std::max(at, now_);
  if (!node.ticks.empty() && *node.ticks.begin() <= at) return;
  node.ticks.insert(at);
  push(at, Tick{node.router.id()});
}

void World::tick(Node& node) {
  apply_effects(node, node.router.on_tick(now_ + node.skew));
  schedule_tick(node);
}

void World::apply_effects(Node& node, const std::vector<fsm::Effect>& effects) {
  std::set<RouterId> torn_down;
  for (const auto& effect : effects) {
    if (const auto* sc = std::get_if<fsm::StateChange>(&effect)) {
      timeline_.push_back(StateTransition{now_, node.router.id(), sc->neighbor, sc->from, sc->to,
                                          sc->to == fsm::NeighborState::Down && torn_down.count(sc->neighbor)});
    } else if (const auto* td = std::get_if<fsm::Teardown>(&effect)) {
      torn_down.insert(td->neighbor);
    } else if (const auto* sh = std::get_if<fsm::SendHello>(&effect)) {
      if (auto frame = node.router.build_hello(sh->link_id, now_ + node.skew)) {
        transmit(node, sh->link_id, *frame);
      }
    } else if (const auto* sl = std::get_if<fsm::SendLsu>(&effect)) {
      if (auto frame = node.router.build_lsu(sl->link_id, now_ + node.skew)) {
        transmit(node, sl->link_id, *frame);
      }
    }
  }
}

void World::transmit(Node& node, const std::string& link_id, const codec::Frame& frame) {
  LinkState& link = *links_.at(link_id);
  Bytes wire = frame.wire();
  const std::size_t idx = record(CaptureRecord{now_, CaptureEvent::Tx, link_id, node.router.id(), std::nullopt,
                                               Origin::Router, wire, std::string(kSentVerdict), std::nullopt});
  if (link.hook) {
    link.hook->on_transmit(Transit{idx, link_id, node.router.id(), std::move(wire), now_}, *link.tap);
  } else {
    fan_out(link, node.router.id(), Origin::Router, wire, idx, Micros{0}, std::nullopt);
  }
}

void World::fan_out(const LinkState& link, RouterId src, Origin origin, const Bytes& wire, std::size_t tx_index,
                    Micros extra_delay, std::optional<RouterId> only) {
  const Timestamp at = now_ + link.spec.latency + std::max(extra_delay, Micros{0});
  for (RouterId dst : link.spec.routers) {
    if (dst == src || (only && dst != *only)) continue;
    push(at, Deliver{link.spec.id, dst, src, origin, wire, tx_index});
  }
}

void World::adversary_transmit(const AdversaryTransmit& t) {
  LinkState& link = *links_.at(t.link_id);
  const std::size_t idx = record(CaptureRecord{now_, CaptureEvent::Tx, t.link_id, link.adversary_id, t.dst,
                                               Origin::Adversary, t.wire, std::string(kSentVerdict), t.cause});
  fan_out(link, link.adversary_id, Origin::Adversary, t.wire, idx, Micros{0}, t.dst);
}

void World::handle(Deliver& d) {
  Node& node = *nodes_.at(d.dst);
  auto rx = [&](Verdict v) {
    record(CaptureRecord{now_, CaptureEvent::Rx, d.link_id, d.src, d.dst, d.origin, d.wire,
                         std::string(to_string(v)), d.tx_index});
  };
  if (node.guard.admit(d.src, now_ + node.skew) == ids::Enforcement::Blocked) {
    rx(Verdict::Blocked);
    return;
  }
  if (node.pending >= config_.input_queue_capacity) {
    rx(Verdict::Overloaded);
    return;
  }
  const Timestamp done = std::max(now_, node.busy_until) + service_time_;
  node.busy_until = done;
  ++node.pending;
  push(done, Process{std::move(d)});
}

void World::handle(Process& p) {
  Deliver& d = p.frame;
  Node& node = *nodes_.at(d.dst);
  --node.pending;
  auto result = node.router.on_receive(d.wire, d.link_id, now_ + node.skew);
  record(CaptureRecord{now_, CaptureEvent::Rx, d.link_id, d.src, d.dst, d.origin, std::move(d.wire),
                       std::string(to_string(result.verdict)), d.tx_index});
  apply_effects(node, result.effects);
  tick(node);
}

void World::handle(Tick& t) {
  Node& node = *nodes_.at(t.router);
  node.ticks.erase(now_);
  tick(node);
}

void World::handle(AdversaryAction& a) {
  LinkState& link = *links_.at(a.link_id);
  link.hook->on_action(a.index, *link.tap);
}

void World::handle(AdversaryTransmit& t) { adversary_transmit(t); }

std::map<std::pair<RouterId, RouterId>, fsm::NeighborState> World::adjacency_matrix() const {
  std::map<std::pair<RouterId, RouterId>, fsm::NeighborState> out;
  for (const auto& [id, node] : nodes_) {
    for (const auto& [nid, rec] : node->router.neighbors()) out[{id, nid}] = rec.state;
  }
  return out;
}

const fsm::Router* World::router(RouterId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second->router;
}

const ids::Guard* World::guard(RouterId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second->guard;
}

}  // namespace ospfsec::sim
