#include <gtest/gtest.h>

#include "ospfsec/guard.hpp"

using namespace ospfsec;
using namespace ospfsec::ids;

namespace {

const Timestamp t0 = Timestamp{} + Seconds{1'293'840'000};
const RouterId attacker{0x0A424242};
const RouterId honest{0x0A000001};

}  // namespace

TEST(RateCounter, TwoHundredOneInOneSecondAlarms) {
  RateCounter c(Seconds{1}, 200);
  for (int i = 0; i < 200; ++i) {
    ASSERT_EQ(c.observe(attacker, t0 + Micros{i * 4000}), Observation::Quiet) << i;
  }
  EXPECT_EQ(c.observe(attacker, t0 + Micros{200 * 4000}), Observation::Alarm);
}

TEST(RateCounter, TwoHundredIsQuiet) {
  RateCounter c(Seconds{1}, 200);
  Observation last = Observation::Quiet;
  for (int i = 0; i < 200; ++i) last = c.observe(attacker, t0 + Micros{i * 1000});
  EXPECT_EQ(last, Observation::Quiet);
  EXPECT_EQ(c.count(attacker, t0 + Micros{199'000}), 200u);
}

TEST(RateCounter, TwoHundredOneSpreadOverTwoSecondsIsQuiet) {
  RateCounter c(Seconds{1}, 200);
  for (int i = 0; i < 201; ++i) {
    ASSERT_EQ(c.observe(attacker, t0 + Micros{i * 10'000}), Observation::Quiet) << i;
  }
}

TEST(RateCounter, CountsAreCoveredPerSource) {
  RateCounter c(Seconds{1}, 2);
  c.observe(attacker, t0);
  c.observe(attacker, t0);
  EXPECT_EQ(c.observe(honest, t0), Observation::Quiet);
  EXPECT_EQ(c.observe(attacker, t0), Observation::Alarm);
}

TEST(RateCounter, WindowDropsOldEntries) {
  RateCounter c(Seconds{1}, 200);
  c.observe(attacker, t0);
  EXPECT_EQ(c.count(attacker, t0 + Micros{999'999}), 1u);
  EXPECT_EQ(c.count(attacker, t0 + Seconds{1}), 0u);
}

TEST(RuleTable, Enforce) {
  RuleTable rules;
  EXPECT_EQ(rules.enforce(attacker, t0), Enforcement::Pass);
  rules.install(attacker, t0, Seconds{60});
  EXPECT_EQ(rules.enforce(attacker, t0 + Seconds{1}), Enforcement::Blocked);
  EXPECT_EQ(rules.enforce(honest, t0 + Seconds{1}), Enforcement::Pass);
  EXPECT_EQ(rules.enforce(attacker, t0 + Seconds{60}), Enforcement::Pass);
}

TEST(RuleTable, AtMostOneActiveRulePerSource) {
  RuleTable rules;
  rules.install(attacker, t0, Seconds{60});
  rules.install(attacker, t0 + Seconds{10}, Seconds{60});
  EXPECT_EQ(rules.installs(), 1u);
  EXPECT_EQ(rules.find(attacker)->installed_at, t0);
  rules.install(attacker, t0 + Seconds{61}, Seconds{60});
  EXPECT_EQ(rules.installs(), 2u);
  EXPECT_EQ(rules.find(attacker)->installed_at, t0 + Seconds{61});
}

TEST(RuleTable, PermanentRule) {
  RuleTable rules;
  rules.install(attacker, t0, std::nullopt);
  EXPECT_EQ(rules.enforce(attacker, t0 + Seconds{1'000'000}), Enforcement::Blocked);
}

TEST(Guard, DisabledPassesEverything) {
  Guard g(GuardConfig{});
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(g.admit(attacker, t0), Enforcement::Pass);
  EXPECT_EQ(g.alarms(), 0u);
}

TEST(Guard, BlocksFloodFromTheTriggeringFrame) {
  GuardConfig cfg;
  cfg.enabled = true;
  Guard g(cfg);
  int passed = 0;
  for (int i = 0; i < 1000; ++i) {
    if (g.admit(attacker, t0 + Micros{i * 1000}) == Enforcement::Pass) ++passed;
  }
  EXPECT_EQ(passed, 200);
  EXPECT_EQ(g.alarms(), 1u);
  EXPECT_EQ(g.admit(honest, t0 + Seconds{1}), Enforcement::Pass);
  // still blocked until the rule expires, even when quiet
  EXPECT_EQ(g.admit(attacker, t0 + Seconds{50}), Enforcement::Blocked);
}

TEST(Guard, NoFalsePositiveAtHelloRate) {
  GuardConfig cfg;
  cfg.enabled = true;
  Guard g(cfg);
  for (int i = 0; i < 10'000; ++i) {
    ASSERT_EQ(g.admit(honest, t0 + Seconds{i * 10}), Enforcement::Pass);
  }
  EXPECT_EQ(g.alarms(), 0u);
}
