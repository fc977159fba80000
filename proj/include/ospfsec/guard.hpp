#pragma once

// Rate-based flood detection in front of the authentication stage. Frames are
// counted per originating node over a trailing window; a source exceeding the
// threshold gets a blocking rule and its frames are filtered until the rule
// expires.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>

#include "ospfsec/types.hpp"

namespace ospfsec::ids {

struct GuardConfig {
  bool enabled{false};
  std::uint32_t threshold_pps{200};
  Seconds window{1};
  Seconds rule_lifetime{60};
};

enum class Observation { Quiet, Alarm };
enum class Enforcement { Pass, Blocked };

class RateCounter {
 public:
  RateCounter(Seconds window, std::uint32_t threshold) : window_(window), threshold_(threshold) {}

  // Alarm exactly when the trailing-window count for source exceeds the threshold.
  Observation observe(RouterId source, Timestamp now);
  std::size_t count(RouterId source, Timestamp now);

 private:
  void prune(std::deque<Timestamp>& times, Timestamp now) const;

  Seconds window_;
  std::uint32_t threshold_;
  std::map<RouterId, std::deque<Timestamp>> counts_;
};

struct BlockRule {
  RouterId source;
  Timestamp installed_at;
  std::optional<Timestamp> expires_at;

  bool active(Timestamp now) const { return !expires_at || now < *expires_at; }
};

class RuleTable {
 public:
  // No-op when an active rule for the source already exists.
  void install(RouterId source, Timestamp now, std::optional<Seconds> lifetime);
  Enforcement enforce(RouterId source, Timestamp now) const;
  const BlockRule* find(RouterId source) const;
  std::size_t installs() const { return installs_; }

 private:
  std::map<RouterId, BlockRule> rules_;
  std::size_t installs_{0};
};

class Guard {
 public:
  explicit Guard(GuardConfig config)
      : config_(config), counter_(config.window, config.threshold_pps) {}

  // Per received frame, before authentication.
  Enforcement admit(RouterId source, Timestamp now);

  const GuardConfig& config() const { return config_; }
  const RuleTable& rules() const { return rules_; }
  std::size_t alarms() const { return alarms_; }

 private:
  GuardConfig config_;
  RateCounter counter_;
  RuleTable rules_;
  std::size_t alarms_{0};
};

}  // namespace ospfsec::ids
