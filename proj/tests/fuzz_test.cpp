#include <gtest/gtest.h>

#include "chronofold.hpp"

using namespace chronofold;

namespace {

FuzzConfig config(std::uint64_t seed, std::size_t replicas, std::size_t ops) {
  FuzzConfig c;
  c.seed = seed;
  c.replicas = replicas;
  c.ops = ops;
  return c;
}

}  // namespace

TEST(Fuzz, SeedOnePasses) {
  auto r = fuzz(config(1, 3, 100));
  EXPECT_TRUE(r.passed) << format_report(r);
  EXPECT_TRUE(r.counterexample.commands.empty());
}

TEST(Fuzz, ManySeedsPass) {
  for (std::uint64_t seed = 2; seed < 40; ++seed) {
    auto r = fuzz(config(seed, 2 + seed % 4, 120));
    ASSERT_TRUE(r.passed) << format_report(r);
  }
}

TEST(Fuzz, GenerationIsDeterministic) {
  auto a = fuzz(config(9, 4, 150));
  auto b = fuzz(config(9, 4, 150));
  EXPECT_EQ(to_string(a.scenario), to_string(b.scenario));
  EXPECT_EQ(format_report(a), format_report(b));
}

TEST(Fuzz, SingleReplicaTypingIsIdentityWeave) {
  ScenarioRunner runner;
  runner.execute(parse_scenario("replica solo\n").commands[0]);
  for (int i = 0; i < 50; ++i) {
    Command c;
    c.kind = Command::Kind::insert;
    c.name = "solo";
    c.pos = static_cast<std::size_t>(i) * 2;
    c.text = U"ab";
    ASSERT_EQ(runner.execute(c).status, Outcome::Status::ok);
  }
  const Document& doc = runner.slot("solo").replica.doc;
  std::vector<LogIndex> identity(doc.length());
  for (LogIndex j = 0; j < doc.length(); ++j) identity[j] = j + 1;
  EXPECT_EQ(doc.weave_indices(), identity);
  EXPECT_TRUE(check_invariants(runner).empty());
}

TEST(Fuzz, InjectedFailureMinimizesAndReplays) {
  FuzzConfig cfg = config(3, 3, 60);
  cfg.extra_check = [](const ScenarioRunner& runner) {
    std::vector<std::string> out;
    for (const auto& s : runner.slots()) {
      if (s.replica.doc.text().find(U'x') != std::u32string::npos) {
        out.push_back("replica " + s.name + " contains x");
      }
    }
    return out;
  };
  auto r = fuzz(cfg);
  ASSERT_FALSE(r.passed);
  ASSERT_FALSE(r.counterexample.commands.empty());
  EXPECT_LT(r.counterexample.commands.size(), r.scenario.commands.size());
  // 1-minimal: dropping any further non-closing command loses the failure.
  const auto closing = detail::closing_syncs(r.counterexample).size();
  const auto body = r.counterexample.commands.size() - closing;
  for (std::size_t i = 0; i < body; ++i) {
    Scenario trial;
    trial.commands.assign(r.counterexample.commands.begin(),
                          r.counterexample.commands.begin() + static_cast<std::ptrdiff_t>(body));
    trial.commands.erase(trial.commands.begin() + static_cast<std::ptrdiff_t>(i));
    for (const auto& c : detail::closing_syncs(trial)) trial.commands.push_back(c);
    EXPECT_FALSE(detail::reproduces(trial, cfg)) << "command " << i << " is removable";
  }

  // The printed counterexample parses back and fails again.
  Scenario replay = parse_scenario(to_string(r.counterexample));
  ScenarioRunner runner;
  for (const auto& c : replay.commands) ASSERT_EQ(runner.execute(c).status, Outcome::Status::ok);
  EXPECT_FALSE(cfg.extra_check(runner).empty());
  EXPECT_NE(format_report(r).find("minimized counterexample"), std::string::npos);
}
