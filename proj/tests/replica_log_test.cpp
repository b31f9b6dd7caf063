#include <gtest/gtest.h>

#include "pinsk_history.hpp"

using namespace chronofold;
using namespace pinsk;

TEST(ReplicaLog, AppendRootToEmptyLog) {
  ReplicaLog log(alice);
  EXPECT_EQ(log_append(log, root), 1u);
}

TEST(ReplicaLog, AppendForeignOpAfterRoot) {
  ReplicaLog log(alice);
  log_append(log, root);
  EXPECT_EQ(log_append(log, M), 2u);
}

TEST(ReplicaLog, AppendErrors) {
  ReplicaLog log(alice);
  auto code_of = [&](const Op& op) {
    try {
      log_append(log, op);
    } catch (const error& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error";
    return errc::parse_error;
  };
  EXPECT_EQ(code_of(M), errc::ref_not_in_log);  // no root yet
  log_append(log, root);
  EXPECT_EQ(code_of(chr(ts(10, george), ts(9, bob), U'x')), errc::ref_not_in_log);
  log_append(log, M);
  EXPECT_EQ(code_of(M), errc::duplicate_id);
  EXPECT_EQ(code_of(root), errc::duplicate_id);
  // alice's next own op must carry andx 3.
  EXPECT_EQ(code_of(chr(ts(5, alice), ts(2, bob), U'x')), errc::bad_self_index);
  EXPECT_EQ(code_of(chr(ts(2, alice), ts(2, bob), U'x')), errc::invalid_op);
  EXPECT_EQ(log.length(), 2u);
}

TEST(ReplicaLog, TombstoneMustTargetChar) {
  ReplicaLog log(bob);
  log_append(log, root);
  EXPECT_THROW(log_append(log, Op{ts(2, bob), ts(1, alice), OpValue::tombstone()}), error);
}

TEST(ReplicaLog, NdxExamples) {
  EXPECT_EQ(ndx(log_of(bob), ts(3, george)), 4u);
  EXPECT_EQ(ndx(log_of(alice), ts(3, george)), 3u);
  EXPECT_EQ(ndx(log_of(george), ts(8, bob)), kInfinity);
  EXPECT_EQ(ndx(log_of(alice), ts(1, alice)), 1u);
}

TEST(ReplicaLog, LengthsAndAuthorIndex) {
  EXPECT_EQ(log_of(alice).length(), 8u);
  EXPECT_EQ(log_of(bob).length(), 8u);
  EXPECT_EQ(log_of(george).length(), 7u);
  EXPECT_EQ(log_of(alice).at(4).id.andx, 3u);
  EXPECT_EQ(log_of(alice).at(4).id.author, bob);
  EXPECT_EQ(log_of(alice).at(4).ref, ts(2, bob));
}

TEST(ReplicaLog, PrefixSets) {
  auto a = log_of(alice);
  std::set<Timestamp> expect4{ts(1, alice), ts(2, bob), ts(3, george), ts(3, bob)};
  EXPECT_EQ(prefix_set(a, 4), expect4);
  EXPECT_TRUE(prefix_set(a, 0).empty());
  auto b = log_of(bob);
  std::set<Timestamp> everything;
  for (const auto& op : all_ops()) everything.insert(op.id);
  EXPECT_EQ(prefix_set(b, b.length()), everything);
  EXPECT_THROW(prefix_set(a, 9), error);
}

// andx(t) <= ndx(log, t) everywhere; equality in the author's own log;
// andx(t) > andx(ref(t)) for non-root ops.
TEST(ReplicaLog, AuthorIndexBounds) {
  auto logs = all_logs();
  for (const auto& log : logs) {
    for (LogIndex i = 1; i <= log.length(); ++i) {
      const Op& op = log.at(i);
      EXPECT_LE(op.id.andx, ndx(log, op.id));
      if (op.id.author == log.author()) {
        EXPECT_EQ(op.id.andx, i);
      }
      if (!op.val.is_root()) {
        EXPECT_GT(op.id.andx, op.ref.andx);
      }
    }
  }
}
