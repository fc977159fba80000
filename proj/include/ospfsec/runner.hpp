#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ospfsec/adversary.hpp"
#include "ospfsec/auth.hpp"
#include "ospfsec/expected.hpp"
#include "ospfsec/guard.hpp"
#include "ospfsec/sim.hpp"

namespace ospfsec::runner {

struct SchemaError {
  std::string field;  // JSON path, e.g. "routers[0].auth.password"
  std::optional<std::size_t> line;
  std::string message;

  std::string what() const;
};

enum class LoadErrorKind { Io, Schema };

struct LoadError {
  LoadErrorKind kind{LoadErrorKind::Schema};
  SchemaError schema;
  std::string io_message;

  std::string what() const;
};

struct AuthVariant {
  std::string name;
  auth::AuthConfig config;
};

struct AdversarySpec {
  RouterId node_id;
  std::string link_id;
  std::vector<adversary::AttackScript> attacks;
};

struct Scenario {
  std::string name;
  WallSeconds start_time;
  Seconds duration{0};
  std::uint64_t seed{0};
  std::vector<sim::RouterSpec> routers;
  std::vector<sim::LinkSpec> links;
  ids::GuardConfig guard;
  std::uint32_t processing_budget_pps{500};
  std::size_t input_queue_capacity{500};
  std::vector<AuthVariant> auth_sweep;  // when non-empty, overrides every router's auth per run
  std::optional<AdversarySpec> adversary;
  std::vector<std::string> warnings;
};

Expected<Scenario, SchemaError> parse_scenario(std::string_view json_text,
                                               const std::filesystem::path& base_dir = {});
Expected<Scenario, LoadError> load_scenario(const std::filesystem::path& path);

Expected<auth::KeyChain, SchemaError> parse_keychain(std::string_view json_text);
Expected<auth::KeyChain, LoadError> load_keychain(const std::filesystem::path& path);

// One simulated world: an auth variant combined with at most one attack.
struct RunCapture {
  std::string name;
  std::vector<sim::CaptureRecord> records;
};

struct TimelineEntry {
  std::string run;
  sim::StateTransition transition;
};

struct RunSummary {
  std::string name;
  std::string auth_mode;
  std::optional<std::string> attack;
  std::size_t capture_begin{0};
  std::size_t capture_end{0};
  std::map<std::pair<RouterId, RouterId>, fsm::NeighborState> final_adjacency;
  std::vector<std::string> secrets_hex;  // configured secrets, for leak scans
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed{0};
  std::string capture_path;
  std::vector<std::string> auth_modes;
  std::vector<std::string> attack_labels;
  std::vector<adversary::AttackOutcome> matrix;
  std::vector<TimelineEntry> adjacency_timeline;
  std::vector<RunSummary> runs;
  std::vector<std::string> warnings;

  const adversary::AttackOutcome* find(std::string_view label, std::string_view auth_mode) const;
};

struct ScenarioResult {
  ScenarioReport report;
  std::vector<RunCapture> captures;
};

struct RunError {
  std::string message;
};

Expected<ScenarioResult, RunError> run_scenario(const Scenario& scenario,
                                                std::optional<std::uint64_t> seed_override = std::nullopt);

// Serialization. Capture is JSON Lines, one frame record per line.
std::string capture_jsonl(const std::vector<RunCapture>& captures);
std::string report_json(const ScenarioReport& report);
std::string report_table(const ScenarioReport& report);

struct CaptureLine {
  std::string run;
  sim::CaptureRecord record;
};

Expected<std::vector<CaptureLine>, SchemaError> parse_capture(std::string_view jsonl);
Expected<std::vector<CaptureLine>, LoadError> load_capture(const std::filesystem::path& path);

struct VerifySummary {
  std::size_t frames{0};
  std::size_t accepted{0};
  std::map<std::string, std::size_t> rejected;

  std::string json() const;
};

// Re-applies authentication to every received frame in the capture.
VerifySummary verify_capture(const std::vector<CaptureLine>& lines, const auth::KeyChain& chain);

}  // namespace ospfsec::runner
