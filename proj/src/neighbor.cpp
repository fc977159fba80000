#include "ospfsec/neighbor.hpp"

#include <algorithm>

namespace ospfsec::fsm {

using codec::OspfPacket;

std::string_view to_string(NeighborState s) {
  switch (s) {
    case NeighborState::Down: return "Down";
    case NeighborState::Init: return "Init";
    case NeighborState::TwoWay: return "TwoWay";
    case NeighborState::Full: return "Full";
  }
  return "Unknown";
}

Router::Router(RouterConfig config, std::vector<LinkAttachment> links, Timestamp first_hello)
    : config_(std::move(config)),
      links_(std::move(links)),
      next_hello_(first_hello),
      next_lsu_(first_hello + config_.hello_interval / 2) {}

void Router::set_state(NeighborRecord& rec, NeighborState to, std::vector<Effect>& effects) {
  if (rec.state == to) return;
  effects.push_back(StateChange{rec.neighbor_id, rec.state, to});
  rec.state = to;
  if (to == NeighborState::Down) {
    rec.seq_state.reset();
    rec.teardown_pending = false;
  }
}

bool Router::has_full_neighbor(const std::string& link_id) const {
  return std::any_of(neighbors_.begin(), neighbors_.end(), [&](const auto& kv) {
    return kv.second.link_id == link_id && kv.second.state == NeighborState::Full;
  });
}

ReceiveResult Router::on_receive(ByteView wire, const std::string& link_id, Timestamp now) {
  ReceiveResult result;
  auto reject = [&](Verdict v) {
    result.verdict = v;
    result.effects.push_back(Drop{v});
    return result;
  };

  auto frame = codec::split_wire(wire);
  if (!frame) return reject(Verdict::Malformed);
  auto packet = codec::decode(*frame);
  if (!packet) return reject(Verdict::Malformed);

  const Verdict auth_verdict = auth::verify_frame(config_.auth, *frame, now);
  if (auth_verdict != Verdict::Accept) return reject(auth_verdict);

  const RouterId sender = packet->header.router_id;
  result.sender = sender;
  if (sender == config_.router_id) return reject(Verdict::SelfOriginated);

  auto it = neighbors_.find(sender);
  const bool known = it != neighbors_.end() && it->second.state != NeighborState::Down;
  if (!packet->is_hello() && !known) return reject(Verdict::NotAdjacent);

  if (packet->header.au_type == codec::AuType::Cryptographic) {
    const auto field = codec::CryptoAuthField::unpack(packet->header.auth);
    auth::SeqState scratch;
    auth::SeqState& seq = it != neighbors_.end() ? it->second.seq_state : scratch;
    const auto sv = auth::check_sequence(seq, field.key_id, field.crypto_sequence, now);
    if (sv == auth::SeqVerdict::Disorder && it != neighbors_.end() && seq.teardown_due() &&
        it->second.state != NeighborState::Down) {
      it->second.teardown_pending = true;
    }
    if (sv != auth::SeqVerdict::Accept) return reject(auth::to_verdict(sv));
    if (it == neighbors_.end()) {
      NeighborRecord rec;
      rec.neighbor_id = sender;
      rec.link_id = link_id;
      rec.seq_state = std::move(scratch);
      it = neighbors_.emplace(sender, std::move(rec)).first;
    }
  }

  result.verdict = Verdict::Accept;
  const auto* hello = packet->hello();
  if (!hello) return result;

  if (it == neighbors_.end()) {
    NeighborRecord rec;
    rec.neighbor_id = sender;
    rec.link_id = link_id;
    it = neighbors_.emplace(sender, std::move(rec)).first;
  }
  NeighborRecord& rec = it->second;
  rec.link_id = link_id;
  if (rec.state == NeighborState::Down) set_state(rec, NeighborState::Init, result.effects);

  const bool lists_us = std::find(hello->neighbors.begin(), hello->neighbors.end(),
                                  config_.router_id) != hello->neighbors.end();
  if (lists_us && rec.state == NeighborState::Init) {
    set_state(rec, NeighborState::TwoWay, result.effects);
    set_state(rec, NeighborState::Full, result.effects);
  }
  rec.last_heard = now;
  rec.inactivity_deadline = now + config_.dead_interval;
  return result;
}

std::vector<Effect> Router::on_tick(Timestamp now) {
  std::vector<Effect> effects;
  for (auto& [id, rec] : neighbors_) {
    if (rec.teardown_pending) {
      effects.push_back(Teardown{id});
      set_state(rec, NeighborState::Down, effects);
    }
    if (rec.state != NeighborState::Down && now >= rec.inactivity_deadline) {
      set_state(rec, NeighborState::Down, effects);
    }
  }
  while (now >= next_hello_) {
    for (const auto& link : links_) effects.push_back(SendHello{link.link_id});
    next_hello_ += config_.hello_interval;
  }
  while (now >= next_lsu_) {
    for (const auto& link : links_) {
      if (has_full_neighbor(link.link_id)) effects.push_back(SendLsu{link.link_id});
    }
    next_lsu_ += config_.hello_interval;
  }
  return effects;
}

Timestamp Router::next_wakeup() const {
  Timestamp t = std::min(next_hello_, next_lsu_);
  for (const auto& [id, rec] : neighbors_) {
    if (rec.state != NeighborState::Down) t = std::min(t, rec.inactivity_deadline);
  }
  return t;
}

std::optional<codec::Frame> Router::finish(OspfPacket packet, Timestamp now) {
  packet.header.router_id = config_.router_id;
  packet.header.area_id = config_.area_id;
  return std::visit(
      [&](const auto& mode) -> std::optional<codec::Frame> {
        using M = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<M, auth::NoAuth>) {
          auto f = codec::encode(auth::sign_none(std::move(packet)));
          return f ? std::optional(std::move(*f)) : std::nullopt;
        } else if constexpr (std::is_same_v<M, auth::SimpleAuth>) {
          auto f = codec::encode(auth::sign_simple(std::move(packet), mode.password));
          return f ? std::optional(std::move(*f)) : std::nullopt;
        } else {
          auto key = auth::select_send_key(mode.chain, now);
          if (!key) {
            ++unsigned_sends_;
            return std::nullopt;
          }
          return auth::sign_md5(std::move(packet), **key, ++crypto_sequence_);
        }
      },
      config_.auth.mode);
}

std::optional<codec::Frame> Router::build_hello(const std::string& link_id, Timestamp now) {
  auto link = std::find_if(links_.begin(), links_.end(),
                           [&](const LinkAttachment& l) { return l.link_id == link_id; });
  if (link == links_.end()) return std::nullopt;

  codec::HelloBody hello;
  hello.network_mask = link->network_mask;
  hello.hello_interval = static_cast<std::uint16_t>(config_.hello_interval.count());
  hello.router_priority = config_.priority;
  hello.dead_interval = static_cast<std::uint32_t>(config_.dead_interval.count());
  for (const auto& [id, rec] : neighbors_) {
    if (rec.link_id == link_id && rec.state != NeighborState::Down) hello.neighbors.push_back(id);
  }

  OspfPacket packet;
  packet.header.type = codec::PacketType::Hello;
  packet.body = std::move(hello);
  return finish(std::move(packet), now);
}

std::optional<codec::Frame> Router::build_lsu(const std::string& link_id, Timestamp now) {
  (void)link_id;
  // Opaque payload: LSU counter, prefix count, then (address, mask) pairs.
  Bytes payload;
  auto put32 = [&](std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) payload.push_back(static_cast<std::uint8_t>(v >> shift));
  };
  put32(++lsu_sequence_);
  put32(static_cast<std::uint32_t>(config_.advertised_networks.size()));
  for (const Prefix& p : config_.advertised_networks) {
    put32(p.address);
    put32(p.mask);
  }

  OspfPacket packet;
  packet.header.type = codec::PacketType::LsUpdate;
  packet.body = codec::OpaqueLsuBody{std::move(payload)};
  return finish(std::move(packet), now);
}

}  // namespace ospfsec::fsm
