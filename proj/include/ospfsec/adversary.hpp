#pragma once

// The attacker: an interposer on one link running one technique per run.
//
// Hooks only act on the wire. Whether an attack worked is decided afterwards
// by evaluate(), from the capture log and the adjacency timeline alone.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ospfsec/auth.hpp"
#include "ospfsec/codec.hpp"
#include "ospfsec/guard.hpp"
#include "ospfsec/sim.hpp"

namespace ospfsec::adversary {

enum class Technique { Eavesdrop, Replay, Inject, Delete, Modify, MitM, DosFlood };

std::string_view to_string(Technique t);
std::optional<Technique> technique_from_string(std::string_view s);

enum class PacketFilter { Any, Hello, Lsu };

std::string_view to_string(PacketFilter f);
std::optional<PacketFilter> filter_from_string(std::string_view s);
bool matches(PacketFilter f, ByteView wire);

struct EavesdropParams {};

struct ReplayParams {
  PacketFilter filter{PacketFilter::Hello};
  std::size_t frame_index{0};  // n-th matching frame from the source after start
  Micros delay{100'000};
  unsigned count{1};
  Micros interval{1'000'000};
};

struct InjectParams {
  PacketFilter kind{PacketFilter::Hello};
  Micros interval{10'000'000};
};

struct DeleteParams {
  PacketFilter filter{PacketFilter::Hello};
};

struct ModifyParams {
  PacketFilter filter{PacketFilter::Lsu};
  std::size_t offset{codec::kHeaderSize};
  std::uint8_t xor_mask{0xFF};
  unsigned count{1};
};

struct MitmParams {
  Micros interval{10'000'000};
};

struct DosParams {
  std::uint32_t rate_pps{1000};
  PacketFilter payload{PacketFilter::Lsu};
};

using AttackParams =
    std::variant<EavesdropParams, ReplayParams, InjectParams, DeleteParams, ModifyParams, MitmParams, DosParams>;

struct AttackScript {
  Technique technique{Technique::Eavesdrop};
  std::string label;  // matrix row; defaults to the technique name
  AttackParams params;
  Seconds start{0};
  Seconds stop{0};
  std::optional<RouterId> source;      // whose frames are targeted (Replay/Delete/Modify)
  std::optional<RouterId> target;      // victim whose verdicts decide success
  std::optional<RouterId> claimed_id;  // identity forged frames claim (Inject/MitM/DoS)
  std::optional<ids::GuardConfig> guard;
};

AttackParams default_params(Technique t);

// Roles resolved against the link the adversary sits on.
struct Roles {
  std::string link_id;
  std::vector<RouterId> link_routers;
  RouterId adversary_id;
  std::optional<RouterId> source;
  RouterId target;
  RouterId claimed_id;
};

// What one router's frames reveal about how it expects to be spoken to.
struct RouterProfile {
  codec::AuType au_type{codec::AuType::Null};
  std::optional<auth::SimplePassword> password;
  std::optional<std::uint8_t> key_id;
  std::optional<codec::HelloBody> hello_template;
};

// What the attacker has learned from frames seen on its link.
struct Knowledge {
  std::vector<Bytes> observed;
  std::vector<auth::SimplePassword> passwords;  // distinct, in order of discovery
  std::set<std::pair<RouterId, RouterId>> topology;
  std::set<RouterId> routers_seen;
  std::optional<codec::AuType> au_type;
  std::optional<std::uint8_t> key_id;
  std::map<RouterId, std::uint32_t> last_sequence;
  std::optional<codec::HelloBody> hello_template;
  RouterId area;
  std::map<RouterId, RouterProfile> profiles;

  void learn(ByteView wire);
};

struct EavesdropReport {
  std::vector<std::string> passwords_recovered;
  std::set<std::pair<RouterId, RouterId>> topology_recovered;
};

// Passive analysis of the frames transmitted on `link_id` within [from, to].
EavesdropReport eavesdrop(std::span<const sim::CaptureRecord> capture, const std::string& link_id,
                          Timestamp from, Timestamp to);

// Frame the attacker can build from its knowledge without any secret. With a
// victim, it mimics what that router itself sends; otherwise the latest frame.
Bytes forge(const Knowledge& k, PacketFilter kind, RouterId claimed, std::vector<RouterId> neighbors,
            std::uint32_t counter, std::mt19937_64& rng, std::optional<RouterId> victim = std::nullopt);

class AttackHook : public sim::Interposer {
 public:
  AttackHook(AttackScript script, Roles roles) : script_(std::move(script)), roles_(std::move(roles)) {}

  void on_attach(sim::LinkTap& tap) override;
  void on_transmit(const sim::Transit& t, sim::LinkTap& tap) final;
  void on_action(std::size_t action, sim::LinkTap& tap) override;

  const Knowledge& knowledge() const { return knowledge_; }
  const AttackScript& script() const { return script_; }
  const Roles& roles() const { return roles_; }

 protected:
  static constexpr std::size_t kStartAction = 0;

  virtual void intercept(const sim::Transit& t, sim::LinkTap& tap) { tap.forward(t); }
  virtual void on_start(sim::LinkTap&) {}

  bool active(const sim::LinkTap& tap) const;
  bool from_source(const sim::Transit& t) const { return !roles_.source || t.sender == *roles_.source; }

  AttackScript script_;
  Roles roles_;
  Knowledge knowledge_;
};

std::shared_ptr<AttackHook> make_hook(const AttackScript& script, const Roles& roles);

struct AttackOutcome {
  Technique technique{Technique::Eavesdrop};
  std::string label;
  std::string auth_mode;
  bool succeeded{false};
  std::vector<std::size_t> evidence;  // capture indices
  std::string detail;
  std::optional<EavesdropReport> eavesdrop;
};

struct RunEvidence {
  std::span<const sim::CaptureRecord> capture;
  std::span<const sim::StateTransition> timeline;
  WallSeconds start_time;
};

AttackOutcome evaluate(const AttackScript& script, const Roles& roles, const RunEvidence& ev);

}  // namespace ospfsec::adversary
