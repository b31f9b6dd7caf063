#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "chronofold.hpp"
#include "test_util.hpp"

using namespace chronofold;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(CHRONOFOLD_SCENARIO_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ParseError parse_error_of(std::string_view src) {
  try {
    parse_scenario(src);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for: " << src;
  return ParseError(0, 0, "");
}

std::u32string text_of(const Transcript& t, const std::string& name) {
  for (const auto& r : t.replicas) {
    if (r.name == name) return r.text;
  }
  ADD_FAILURE() << "no replica " << name;
  return {};
}

}  // namespace

TEST(Parse, AllCommands) {
  auto sc = parse_scenario(
      "# comment\n"
      "replica a\n"
      "\n"
      "replica b   # trailing comment\n"
      "insert a 0 \"x\\\"y\\n\\\\ é\"\n"
      "delete a 1 2\n"
      "sync a b\n"
      "sync b a 3\n"
      "expect b \"\"\n"
      "rebase a\r\n");
  ASSERT_EQ(sc.commands.size(), 8u);
  EXPECT_EQ(sc.commands[0].kind, Command::Kind::replica);
  EXPECT_EQ(sc.commands[1].line, 4u);
  EXPECT_EQ(sc.commands[2].text, U"x\"y\n\\ é");
  EXPECT_EQ(sc.commands[3].pos, 1u);
  EXPECT_EQ(sc.commands[3].len, 2u);
  EXPECT_FALSE(sc.commands[4].limit.has_value());
  EXPECT_EQ(sc.commands[5].limit, std::optional<std::size_t>(3));
  EXPECT_EQ(sc.commands[6].text, U"");
  EXPECT_EQ(sc.commands[7].kind, Command::Kind::rebase);

  auto again = parse_scenario(to_string(sc));
  ASSERT_EQ(again.commands.size(), sc.commands.size());
  for (std::size_t i = 0; i < sc.commands.size(); ++i) {
    Command c = again.commands[i];
    c.line = sc.commands[i].line;
    EXPECT_EQ(c, sc.commands[i]);
  }
}

TEST(Parse, ErrorsCarryLocation) {
  auto e = parse_error_of("replica a\nfrobnicate a\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 1u);
  e = parse_error_of("replica a\ninsert b 0 \"x\"\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 8u);
  e = parse_error_of("replica a\nreplica  a\n");
  EXPECT_EQ(e.column(), 10u);
  e = parse_error_of("replica a\ninsert a x \"x\"\n");
  EXPECT_EQ(e.column(), 10u);
  e = parse_error_of("replica a\ninsert a 0 \"x\n");
  EXPECT_EQ(e.column(), 14u);
  e = parse_error_of("replica a\ndelete a 0 1 junk\n");
  EXPECT_EQ(e.column(), 14u);
  parse_error_of("replica a\nsync a a\n");
  parse_error_of("replica a\ndelete a 0 0\n");
  parse_error_of("replica a\ninsert a 0 \"\"\n");
  parse_error_of("replica a\ninsert a 0 \"\\q\"\n");
  parse_error_of("replica bad\x01name\n");
  parse_error_of("replica a\ninsert a 0 \"\xff\"\n");
}

TEST(Run, Pinsk) {
  auto t = run_script(parse_scenario(read_file("pinsk.scn")));
  EXPECT_TRUE(t.passed()) << format_transcript(t);
  EXPECT_EQ(u8(text_of(t, "alpha")), "PINSK");
  EXPECT_EQ(u8(text_of(t, "gamma")), "PINS");
}

TEST(Run, Lobachevsky) {
  auto t = run_script(parse_scenario(read_file("lobachevsky.scn")));
  EXPECT_TRUE(t.passed()) << format_transcript(t);
  EXPECT_EQ(u8(text_of(t, "r1")), "LOBACHEVSKY");
  EXPECT_EQ(u8(text_of(t, "r2")), "LOBACHEVSKY");
}

TEST(Run, ConcurrentLines) {
  auto t = run_script(parse_scenario(read_file("concurrent_lines.scn")));
  EXPECT_TRUE(t.passed()) << format_transcript(t);
}

TEST(Run, EmptyScenario) {
  auto t = run_script(parse_scenario(""));
  EXPECT_TRUE(t.outcomes.empty());
  EXPECT_TRUE(t.replicas.empty());
  EXPECT_TRUE(t.passed());
  EXPECT_EQ(format_transcript(t), "RESULT PASS\n");
}

TEST(Run, FailedExpectationContinues) {
  auto t = run_script(parse_scenario("replica a\ninsert a 0 \"hi\"\nexpect a \"ho\"\nexpect a \"hi\"\n"));
  EXPECT_FALSE(t.passed());
  EXPECT_FALSE(t.has_error());
  ASSERT_EQ(t.outcomes.size(), 4u);
  EXPECT_EQ(t.outcomes[2].status, Outcome::Status::failed);
  EXPECT_EQ(t.outcomes[3].status, Outcome::Status::ok);
  const std::string out = format_transcript(t);
  EXPECT_NE(out.find("expected \"ho\", actual \"hi\""), std::string::npos);
  EXPECT_NE(out.find("RESULT FAIL"), std::string::npos);
}

TEST(Run, RuntimeErrorsStopTheRun) {
  auto t = run_script(parse_scenario("replica a\ninsert a 1 \"x\"\nexpect a \"\"\n"));
  EXPECT_TRUE(t.has_error());
  EXPECT_EQ(t.outcomes.size(), 2u);
  t = run_script(parse_scenario("replica a\ninsert a 0 \"ab\"\ndelete a 1 5\n"));
  EXPECT_TRUE(t.has_error());
}

TEST(Run, RebaseKeepsTextAndEndsSharing) {
  auto t = run_script(parse_scenario(
      "replica a\nreplica b\ninsert a 0 \"abc\"\ndelete a 1 1\nrebase a\nexpect a \"ac\"\n"
      "sync a b\n"));
  EXPECT_EQ(t.outcomes[5].status, Outcome::Status::ok);
  EXPECT_EQ(t.outcomes[6].status, Outcome::Status::error);
}

TEST(Run, Deterministic) {
  const auto sc = parse_scenario(read_file("pinsk.scn"));
  EXPECT_EQ(format_transcript(run_script(sc)), format_transcript(run_script(sc)));
}
