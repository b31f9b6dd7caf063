#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "pinsk_history.hpp"

using namespace chronofold;
using namespace pinsk;

namespace {

// Reflexive-transitive closure of the one-step relation by Floyd-Warshall:
// r -> u iff r = ref(u) or r ∈ LOG_andx(u)(auth(u)).
std::map<std::pair<Timestamp, Timestamp>, bool> closure(const std::vector<ReplicaLog>& logs) {
  std::vector<Op> ops = all_ops();
  std::map<Author, const ReplicaLog*> by_author;
  for (const auto& l : logs) by_author[l.author()] = &l;
  const std::size_t n = ops.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t u = 0; u < n; ++u) {
      const Op& uo = ops[u];
      bool step = r == u || ops[r].id == uo.ref;
      const ReplicaLog& own = *by_author.at(uo.id.author);
      for (LogIndex k = 1; k <= uo.id.andx && !step; ++k) step = own.at(k).id == ops[r].id;
      reach[r][u] = step;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::map<std::pair<Timestamp, Timestamp>, bool> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[{ops[i].id, ops[j].id}] = reach[i][j];
  return out;
}

}  // namespace

TEST(Causality, Examples) {
  auto logs = all_logs();
  EXPECT_TRUE(causally_precedes(logs, ts(1, alice), ts(3, bob)));
  EXPECT_TRUE(causally_precedes(logs, ts(7, george), ts(7, george)));
  EXPECT_FALSE(causally_precedes(logs, ts(8, bob), ts(1, alice)));
  EXPECT_THROW(causally_precedes(logs, ts(4, bob), ts(1, alice)), error);
}

TEST(Causality, AgreesWithTransitiveClosure) {
  auto logs = all_logs();
  for (const auto& [pair, expected] : closure(logs)) {
    EXPECT_EQ(causally_precedes(logs, pair.first, pair.second), expected)
        << pair.first << " vs " << pair.second;
  }
}

TEST(Causality, StrictPrecedenceImpliesSmallerAndx) {
  auto logs = all_logs();
  for (const auto& s : all_ops()) {
    for (const auto& t : all_ops()) {
      if (s.id != t.id && causally_precedes(logs, s.id, t.id)) {
        EXPECT_LT(s.id.andx, t.id.andx);
      }
    }
  }
}

TEST(Causality, PrefixesAreCausallyClosed) {
  auto logs = all_logs();
  for (const auto& log : logs) {
    for (LogIndex i = 0; i <= log.length(); ++i) {
      auto prefix = prefix_set(log, i);
      for (const auto& t : prefix) {
        for (const auto& s : all_ops()) {
          if (causally_precedes(logs, s.id, t)) {
            EXPECT_TRUE(prefix.contains(s.id));
          }
        }
      }
    }
  }
}

TEST(CheckAxioms, PinskLogsAreValid) {
  auto logs = all_logs();
  EXPECT_TRUE(check_axioms(logs).empty());
}

TEST(CheckAxioms, RootOnlyLogIsValid) {
  ReplicaLog log(alice);
  log_append(log, root);
  std::vector<ReplicaLog> logs{log};
  EXPECT_TRUE(check_axioms(logs).empty());
}

TEST(CheckAxioms, SwappedEntriesViolateAxiomThree) {
  // alice receives <3,george> before <2,bob>, which it depends on.
  std::vector<Op> order{root, del_M, M, I, N, P, S, K};
  ReplicaLog swapped(alice);
  for (const auto& op : order) swapped.push_unchecked(op);
  std::vector<ReplicaLog> logs{swapped, log_of(bob), log_of(george)};
  auto v = check_axioms(logs);
  ASSERT_FALSE(v.empty());
  bool axiom3_at_alpha = false;
  for (const auto& x : v) {
    if (x.axiom == 3 && x.process == alice && x.index == 2) axiom3_at_alpha = true;
  }
  EXPECT_TRUE(axiom3_at_alpha);
}

TEST(CheckAxioms, DetectsMisplacedOwnOp) {
  // bob's own op <3,bob> sitting at index 4 of bob's log breaks axiom 1.
  std::vector<Op> order{root, M, del_M, I, P, N, S, K};
  ReplicaLog b(bob);
  for (const auto& op : order) b.push_unchecked(op);
  std::vector<ReplicaLog> logs{log_of(alice), b, log_of(george)};
  bool axiom1 = false;
  for (const auto& x : check_axioms(logs)) axiom1 |= x.axiom == 1;
  EXPECT_TRUE(axiom1);
}

TEST(CheckAxioms, DetectsMissingAuthorLog) {
  std::vector<ReplicaLog> logs{log_of(alice), log_of(bob)};
  auto v = check_axioms(logs);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().axiom, 1);
}
