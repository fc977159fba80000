#include "ospfsec/adversary.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace ospfsec::adversary {

using sim::CaptureEvent;
using sim::CaptureRecord;
using sim::Origin;

namespace {

constexpr std::size_t kEvidenceCap = 64;

constexpr std::array<std::pair<Technique, std::string_view>, 7> kTechniqueNames{{
    {Technique::Eavesdrop, "eavesdrop"},
    {Technique::Replay, "replay"},
    {Technique::Inject, "inject"},
    {Technique::Delete, "delete"},
    {Technique::Modify, "modify"},
    {Technique::MitM, "mitm"},
    {Technique::DosFlood, "dos_flood"},
}};

Timestamp at_offset(WallSeconds start, Seconds offset) { return Timestamp{start + offset}; }

void add_evidence(std::vector<std::size_t>& ev, std::size_t idx) {
  if (ev.size() < kEvidenceCap) ev.push_back(idx);
}

std::string verdict_counts(const std::map<std::string, std::size_t>& counts) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, n] : counts) {
    os << (first ? "" : " ") << name << "=" << n;
    first = false;
  }
  return first ? "none" : os.str();
}

std::string password_string(const auth::SimplePassword& p) {
  auto end = std::find(p.begin(), p.end(), std::uint8_t{0});
  return std::string(p.begin(), end);
}

// ---------------------------------------------------------------------------

class EavesdropHook final : public AttackHook {
 public:
  using AttackHook::AttackHook;
};

class ReplayHook final : public AttackHook {
 public:
  ReplayHook(AttackScript script, Roles roles, ReplayParams params)
      : AttackHook(std::move(script), std::move(roles)), params_(params) {}

 protected:
  void intercept(const sim::Transit& t, sim::LinkTap& tap) override {
    tap.forward(t);
    if (!active(tap) || !from_source(t) || !matches(params_.filter, t.wire)) return;
    if (seen_++ != params_.frame_index) return;
    for (unsigned i = 0; i < params_.count; ++i) {
      tap.originate(t.wire, roles_.target, params_.delay + params_.interval * i, t.tx_index);
    }
  }

 private:
  ReplayParams params_;
  std::size_t seen_{0};
};

class InjectHook final : public AttackHook {
 public:
  InjectHook(AttackScript script, Roles roles, InjectParams params)
      : AttackHook(std::move(script), std::move(roles)), params_(params) {}

  void on_action(std::size_t action, sim::LinkTap& tap) override {
    if (action != kInject) return AttackHook::on_action(action, tap);
    if (!active(tap)) return;
    tap.originate(
        forge(knowledge_, params_.kind, roles_.claimed_id, {roles_.target}, ++counter_, tap.rng(), roles_.target),
        roles_.target);
    tap.schedule(tap.now() + params_.interval, kInject);
  }

 protected:
  void on_start(sim::LinkTap& tap) override { on_action(kInject, tap); }

 private:
  static constexpr std::size_t kInject = 1;
  InjectParams params_;
  std::uint32_t counter_{0};
};

class DeleteHook final : public AttackHook {
 public:
  DeleteHook(AttackScript script, Roles roles, DeleteParams params)
      : AttackHook(std::move(script), std::move(roles)), params_(params) {}

 protected:
  void intercept(const sim::Transit& t, sim::LinkTap& tap) override {
    if (active(tap) && from_source(t) && matches(params_.filter, t.wire)) {
      tap.drop(t);
    } else {
      tap.forward(t);
    }
  }

 private:
  DeleteParams params_;
};

class ModifyHook final : public AttackHook {
 public:
  ModifyHook(AttackScript script, Roles roles, ModifyParams params)
      : AttackHook(std::move(script), std::move(roles)), params_(params), remaining_(params.count) {}

 protected:
  void intercept(const sim::Transit& t, sim::LinkTap& tap) override {
    auto split = codec::split_wire(t.wire);
    if (remaining_ == 0 || !active(tap) || !from_source(t) || !matches(params_.filter, t.wire) || !split ||
        params_.offset >= split->packet_bytes.size()) {
      tap.forward(t);
      return;
    }
    --remaining_;
    Bytes& packet = split->packet_bytes;
    packet[params_.offset] ^= params_.xor_mask;
    // Without a digest the checksum is the only integrity check, and anyone can recompute it.
    if (codec::peek_au_type(packet) != codec::AuType::Cryptographic) {
      packet[codec::kChecksumOffset] = 0;
      packet[codec::kChecksumOffset + 1] = 0;
      const std::uint16_t sum = codec::compute_checksum(packet);
      packet[codec::kChecksumOffset] = static_cast<std::uint8_t>(sum >> 8);
      packet[codec::kChecksumOffset + 1] = static_cast<std::uint8_t>(sum);
    }
    const Bytes mutated = split->wire();
    for (RouterId dst : tap.endpoints()) {
      if (dst != t.sender) tap.originate(mutated, dst, Micros{0}, t.tx_index);
    }
  }

 private:
  ModifyParams params_;
  unsigned remaining_;
};

class MitmHook final : public AttackHook {
 public:
  MitmHook(AttackScript script, Roles roles, MitmParams params)
      : AttackHook(std::move(script), std::move(roles)), params_(params) {}

  void on_action(std::size_t action, sim::LinkTap& tap) override {
    if (action != kHello) return AttackHook::on_action(action, tap);
    if (!active(tap)) return;
    announce(tap);
    tap.schedule(tap.now() + params_.interval, kHello);
  }

 protected:
  void on_start(sim::LinkTap& tap) override { on_action(kHello, tap); }

  // Relay everything, and answer every victim Hello with our own.
  void intercept(const sim::Transit& t, sim::LinkTap& tap) override {
    tap.forward(t);
    if (active(tap) && matches(PacketFilter::Hello, t.wire)) announce(tap);
  }

 private:
  void announce(sim::LinkTap& tap) {
    std::vector<RouterId> heard;
    for (RouterId r : roles_.link_routers) {
      if (knowledge_.routers_seen.count(r)) heard.push_back(r);
    }
    tap.originate(forge(knowledge_, PacketFilter::Hello, roles_.claimed_id, heard, ++counter_, tap.rng()),
                  std::nullopt);
  }

  static constexpr std::size_t kHello = 1;
  MitmParams params_;
  std::uint32_t counter_{0};
};

class DosHook final : public AttackHook {
 public:
  DosHook(AttackScript script, Roles roles, DosParams params)
      : AttackHook(std::move(script), std::move(roles)),
        params_(params),
        period_(Micros{1'000'000 / std::max<std::uint32_t>(params.rate_pps, 1)}) {}

  void on_action(std::size_t action, sim::LinkTap& tap) override {
    if (action != kFlood) return AttackHook::on_action(action, tap);
    if (!active(tap)) return;
    tap.originate(forge(knowledge_, params_.payload, roles_.claimed_id, {}, ++counter_, tap.rng(), roles_.target),
                  roles_.target);
    tap.schedule(tap.now() + period_, kFlood);
  }

 protected:
  void on_start(sim::LinkTap& tap) override { on_action(kFlood, tap); }

 private:
  static constexpr std::size_t kFlood = 1;
  DosParams params_;
  Micros period_;
  std::uint32_t counter_{0};
};

}  // namespace

std::string_view to_string(Technique t) {
  for (const auto& [tech, name] : kTechniqueNames) {
    if (tech == t) return name;
  }
  return "unknown";
}

std::optional<Technique> technique_from_string(std::string_view s) {
  for (const auto& [tech, name] : kTechniqueNames) {
    if (name == s) return tech;
  }
  return std::nullopt;
}

std::string_view to_string(PacketFilter f) {
  switch (f) {
    case PacketFilter::Any: return "any";
    case PacketFilter::Hello: return "hello";
    case PacketFilter::Lsu: return "lsu";
  }
  return "any";
}

std::optional<PacketFilter> filter_from_string(std::string_view s) {
  if (s == "any") return PacketFilter::Any;
  if (s == "hello") return PacketFilter::Hello;
  if (s == "lsu") return PacketFilter::Lsu;
  return std::nullopt;
}

bool matches(PacketFilter f, ByteView wire) {
  if (f == PacketFilter::Any) return true;
  if (wire.size() < 2) return false;
  const auto type = static_cast<codec::PacketType>(wire[1]);
  return f == PacketFilter::Hello ? type == codec::PacketType::Hello : type == codec::PacketType::LsUpdate;
}

AttackParams default_params(Technique t) {
  switch (t) {
    case Technique::Eavesdrop: return EavesdropParams{};
    case Technique::Replay: return ReplayParams{};
    case Technique::Inject: return InjectParams{};
    case Technique::Delete: return DeleteParams{};
    case Technique::Modify: return ModifyParams{};
    case Technique::MitM: return MitmParams{};
    case Technique::DosFlood: return DosParams{};
  }
  return EavesdropParams{};
}

void Knowledge::learn(ByteView wire) {
  observed.emplace_back(wire.begin(), wire.end());
  auto packet = codec::decode(wire);
  if (!packet) return;
  const auto& h = packet->header;
  routers_seen.insert(h.router_id);
  area = h.area_id;
  au_type = h.au_type;
  auto& profile = profiles[h.router_id];
  profile.au_type = h.au_type;
  if (h.au_type == codec::AuType::Simple) {
    profile.password = h.auth;
    if (std::find(passwords.begin(), passwords.end(), h.auth) == passwords.end()) passwords.push_back(h.auth);
  }
  if (h.au_type == codec::AuType::Cryptographic) {
    const auto field = codec::CryptoAuthField::unpack(h.auth);
    key_id = field.key_id;
    profile.key_id = field.key_id;
    last_sequence[h.router_id] = field.crypto_sequence;
  }
  if (const auto* hello = packet->hello()) {
    for (RouterId n : hello->neighbors) topology.insert({h.router_id, n});
    hello_template = *hello;
    hello_template->neighbors.clear();
    profile.hello_template = hello_template;
  }
}

EavesdropReport eavesdrop(std::span<const CaptureRecord> capture, const std::string& link_id, Timestamp from,
                          Timestamp to) {
  Knowledge k;
  for (const auto& rec : capture) {
    if (rec.event != CaptureEvent::Tx || rec.link_id != link_id || rec.time < from || rec.time > to) continue;
    k.learn(rec.frame);
  }
  EavesdropReport report;
  for (const auto& p : k.passwords) report.passwords_recovered.push_back(password_string(p));
  report.topology_recovered = std::move(k.topology);
  return report;
}

Bytes forge(const Knowledge& k, PacketFilter kind, RouterId claimed, std::vector<RouterId> neighbors,
            std::uint32_t counter, std::mt19937_64& rng, std::optional<RouterId> victim) {
  RouterProfile latest;
  latest.au_type = k.au_type.value_or(codec::AuType::Null);
  if (!k.passwords.empty()) latest.password = k.passwords.back();
  latest.key_id = k.key_id;
  latest.hello_template = k.hello_template;
  const RouterProfile* profile = &latest;
  if (victim) {
    if (auto it = k.profiles.find(*victim); it != k.profiles.end()) profile = &it->second;
  }

  codec::OspfPacket packet;
  packet.header.router_id = claimed;
  packet.header.area_id = k.area;
  if (kind == PacketFilter::Lsu) {
    packet.header.type = codec::PacketType::LsUpdate;
    Bytes payload{static_cast<std::uint8_t>(counter >> 24), static_cast<std::uint8_t>(counter >> 16),
                  static_cast<std::uint8_t>(counter >> 8), static_cast<std::uint8_t>(counter)};
    packet.body = codec::OpaqueLsuBody{std::move(payload)};
  } else {
    packet.header.type = codec::PacketType::Hello;
    codec::HelloBody hello = profile->hello_template.value_or(codec::HelloBody{});
    hello.neighbors = std::move(neighbors);
    packet.body = std::move(hello);
  }

  switch (profile->au_type) {
    case codec::AuType::Null:
      return codec::encode(auth::sign_none(std::move(packet)))->wire();
    case codec::AuType::Simple: {
      auth::SimplePassword guess{};
      if (profile->password) {
        guess = *profile->password;
      } else {
        for (auto& b : guess) b = static_cast<std::uint8_t>(rng());
      }
      return codec::encode(auth::sign_simple(std::move(packet), guess))->wire();
    }
    case codec::AuType::Cryptographic: {
      std::uint32_t seq = counter;
      for (const auto& [id, s] : k.last_sequence) seq = std::max(seq, s + 1);
      packet.header.au_type = codec::AuType::Cryptographic;
      packet.header.auth = codec::CryptoAuthField{0, profile->key_id.value_or(1), codec::kDigestSize, seq}.pack();
      codec::Digest guess;
      for (auto& b : guess) b = static_cast<std::uint8_t>(rng());
      packet.digest = guess;
      return codec::encode(packet)->wire();
    }
  }
  return {};
}

void AttackHook::on_attach(sim::LinkTap& tap) {
  tap.schedule(at_offset(tap.start_time(), script_.start), kStartAction);
}

void AttackHook::on_transmit(const sim::Transit& t, sim::LinkTap& tap) {
  knowledge_.learn(t.wire);
  intercept(t, tap);
}

void AttackHook::on_action(std::size_t action, sim::LinkTap& tap) {
  if (action == kStartAction) on_start(tap);
}

bool AttackHook::active(const sim::LinkTap& tap) const {
  const Timestamp now = tap.now();
  return now >= at_offset(tap.start_time(), script_.start) && now <= at_offset(tap.start_time(), script_.stop);
}

std::shared_ptr<AttackHook> make_hook(const AttackScript& script, const Roles& roles) {
  return std::visit(
      [&](const auto& p) -> std::shared_ptr<AttackHook> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, EavesdropParams>) return std::make_shared<EavesdropHook>(script, roles);
        if constexpr (std::is_same_v<P, ReplayParams>) return std::make_shared<ReplayHook>(script, roles, p);
        if constexpr (std::is_same_v<P, InjectParams>) return std::make_shared<InjectHook>(script, roles, p);
        if constexpr (std::is_same_v<P, DeleteParams>) return std::make_shared<DeleteHook>(script, roles, p);
        if constexpr (std::is_same_v<P, ModifyParams>) return std::make_shared<ModifyHook>(script, roles, p);
        if constexpr (std::is_same_v<P, MitmParams>) return std::make_shared<MitmHook>(script, roles, p);
        if constexpr (std::is_same_v<P, DosParams>) return std::make_shared<DosHook>(script, roles, p);
      },
      script.params);
}

AttackOutcome evaluate(const AttackScript& script, const Roles& roles, const RunEvidence& ev) {
  AttackOutcome out;
  out.technique = script.technique;
  out.label = script.label.empty() ? std::string(to_string(script.technique)) : script.label;
  const Timestamp start = at_offset(ev.start_time, script.start);
  const Timestamp stop = at_offset(ev.start_time, script.stop);
  auto on_link = [&](RouterId r) {
    return std::find(roles.link_routers.begin(), roles.link_routers.end(), r) != roles.link_routers.end();
  };
  std::ostringstream detail;

  switch (script.technique) {
    case Technique::Eavesdrop: {
      auto report = eavesdrop(ev.capture, roles.link_id, start, stop);
      for (std::size_t i = 0; i < ev.capture.size(); ++i) {
        const auto& rec = ev.capture[i];
        if (rec.event == CaptureEvent::Tx && rec.link_id == roles.link_id && rec.time >= start && rec.time <= stop) {
          add_evidence(out.evidence, i);
        }
      }
      out.succeeded = !report.passwords_recovered.empty() || !report.topology_recovered.empty();
      detail << "passwords recovered: " << report.passwords_recovered.size()
             << "; adjacencies recovered: " << report.topology_recovered.size();
      out.eavesdrop = std::move(report);
      break;
    }

    case Technique::Replay:
    case Technique::Inject:
    case Technique::Modify: {
      std::map<std::string, std::size_t> counts;
      for (std::size_t i = 0; i < ev.capture.size(); ++i) {
        const auto& rec = ev.capture[i];
        if (rec.event != CaptureEvent::Rx || rec.origin != Origin::Adversary || rec.dst != roles.target) continue;
        ++counts[rec.verdict];
        add_evidence(out.evidence, i);
        if (rec.verdict != to_string(Verdict::Accept)) continue;
        if (script.technique == Technique::Modify) {
          // Only counts if the victim accepted content that differs from what was sent.
          const auto& tx = ev.capture[*rec.cause];
          const bool altered = tx.cause && ev.capture[*tx.cause].frame != rec.frame;
          out.succeeded = out.succeeded || altered;
        } else {
          out.succeeded = true;
        }
      }
      if (counts.empty()) {
        detail << (script.technique == Technique::Replay ? "no captured frame at frame_index to replay"
                                                         : "no forged frame reached the victim");
      } else {
        detail << "victim " << roles.target.str() << " verdicts on attacker frames: " << verdict_counts(counts);
      }
      break;
    }

    case Technique::Delete: {
      std::size_t drops = 0;
      for (std::size_t i = 0; i < ev.capture.size(); ++i) {
        if (ev.capture[i].event == CaptureEvent::Drop && ev.capture[i].link_id == roles.link_id) {
          ++drops;
          add_evidence(out.evidence, i);
        }
      }
      std::size_t losses = 0;
      for (const auto& st : ev.timeline) {
        if (on_link(st.router) && on_link(st.neighbor) && st.from == fsm::NeighborState::Full &&
            st.to != fsm::NeighborState::Full && st.time >= start && st.time <= stop) {
          ++losses;
        }
      }
      out.succeeded = losses > 0;
      detail << drops << " frames deleted; " << losses << " adjacency losses";
      break;
    }

    case Technique::MitM: {
      std::set<RouterId> fooled;
      for (const auto& st : ev.timeline) {
        if (on_link(st.router) && st.neighbor == roles.claimed_id && st.to == fsm::NeighborState::Full) {
          fooled.insert(st.router);
        }
      }
      std::map<std::string, std::size_t> counts;
      for (std::size_t i = 0; i < ev.capture.size(); ++i) {
        const auto& rec = ev.capture[i];
        if (rec.event == CaptureEvent::Rx && rec.origin == Origin::Adversary) {
          ++counts[rec.verdict];
          add_evidence(out.evidence, i);
        }
      }
      out.succeeded = !fooled.empty();
      detail << "routers Full with " << roles.claimed_id.str() << ": " << fooled.size()
             << "; verdicts on attacker frames: " << verdict_counts(counts);
      break;
    }

    case Technique::DosFlood: {
      std::size_t legit_lost = 0;
      std::map<std::string, std::size_t> flood;
      for (std::size_t i = 0; i < ev.capture.size(); ++i) {
        const auto& rec = ev.capture[i];
        if (rec.event != CaptureEvent::Rx || rec.dst != roles.target) continue;
        if (rec.origin == Origin::Adversary) {
          ++flood[rec.verdict];
        } else if (rec.verdict == to_string(Verdict::Overloaded)) {
          ++legit_lost;
          add_evidence(out.evidence, i);
        }
      }
      std::size_t losses = 0;
      for (const auto& st : ev.timeline) {
        if (st.router == roles.target && st.from == fsm::NeighborState::Full && st.time >= start) ++losses;
      }
      out.succeeded = legit_lost > 0;
      detail << "legitimate frames lost to overload: " << legit_lost << "; adjacency losses at victim: " << losses
             << "; flood verdicts: " << verdict_counts(flood);
      break;
    }
  }
  out.detail = detail.str();
  return out;
}

}  // namespace ospfsec::adversary
