#include "ospfsec/guard.hpp"

namespace ospfsec::ids {

void RateCounter::prune(std::deque<Timestamp>& times, Timestamp now) const {
  while (!times.empty() && now - times.front() >= window_) times.pop_front();
}

Observation RateCounter::observe(RouterId source, Timestamp now) {
  auto& times = counts_[source];
  prune(times, now);
  times.push_back(now);
  return times.size() > threshold_ ? Observation::Alarm : Observation::Quiet;
}

std::size_t RateCounter::count(RouterId source, Timestamp now) {
  auto it = counts_.find(source);
  if (it == counts_.end()) return 0;
  prune(it->second, now);
  return it->second.size();
}

void RuleTable::install(RouterId source, Timestamp now, std::optional<Seconds> lifetime) {
  if (auto it = rules_.find(source); it != rules_.end() && it->second.active(now)) return;
  std::optional<Timestamp> expires;
  if (lifetime) expires = now + *lifetime;
  rules_[source] = BlockRule{source, now, expires};
  ++installs_;
}

Enforcement RuleTable::enforce(RouterId source, Timestamp now) const {
  auto it = rules_.find(source);
  return it != rules_.end() && it->second.active(now) ? Enforcement::Blocked : Enforcement::Pass;
}

const BlockRule* RuleTable::find(RouterId source) const {
  auto it = rules_.find(source);
  return it == rules_.end() ? nullptr : &it->second;
}

Enforcement Guard::admit(RouterId source, Timestamp now) {
  if (!config_.enabled) return Enforcement::Pass;
  if (rules_.enforce(source, now) == Enforcement::Blocked) return Enforcement::Blocked;
  if (counter_.observe(source, now) == Observation::Alarm) {
    ++alarms_;
    rules_.install(source, now, config_.rule_lifetime);
    return Enforcement::Blocked;
  }
  return Enforcement::Pass;
}

}  // namespace ospfsec::ids
