#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chronofold/error.hpp"
#include "chronofold/op.hpp"
#include "chronofold/timestamp.hpp"

namespace chronofold {

/// A process's subjectively ordered, injective, causally closed sequence of
/// ops. Indices are 1-based; entry 1 is the root op.
class ReplicaLog {
 public:
  ReplicaLog() = default;
  explicit ReplicaLog(Author owner) : author_(owner) {}

  const Author& author() const noexcept { return author_; }
  LogIndex length() const noexcept { return static_cast<LogIndex>(entries_.size()); }
  bool empty() const noexcept { return entries_.empty(); }

  const Op& at(LogIndex i) const {
    if (i == 0 || i > length()) {
      throw error(errc::out_of_range, "log index " + std::to_string(i) + " of " +
                                          std::to_string(length()));
    }
    return entries_[i - 1];
  }

  std::span<const Op> entries() const noexcept { return entries_; }

  /// Appends without any checks. The caller has already established every
  /// log invariant.
  LogIndex push_unchecked(const Op& op) {
    entries_.push_back(op);
    return length();
  }

 private:
  Author author_;
  std::vector<Op> entries_;
};

/// Linear-scan index of `t` in `log`, or kInfinity.
inline LogIndex ndx(const ReplicaLog& log, const Timestamp& t) noexcept {
  auto entries = log.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].id == t) return static_cast<LogIndex>(i + 1);
  }
  return kInfinity;
}

/// Checked append. Enforces the axioms for the new last entry: unique id,
/// a present parent, and andx = new length for self-authored ops.
inline LogIndex log_append(ReplicaLog& log, const Op& op) {
  validate_shape(op);
  if (log.empty()) {
    if (!op.val.is_root()) {
      throw error(errc::ref_not_in_log, "first op of a log must be the root");
    }
  } else if (op.val.is_root()) {
    throw error(op.id == log.at(1).id ? errc::duplicate_id : errc::invalid_op,
                "log already has a root");
  }
  if (ndx(log, op.id) != kInfinity) {
    throw error(errc::duplicate_id, to_string(op.id));
  }
  if (op.id.author == log.author() && op.id.andx != log.length() + 1) {
    throw error(errc::bad_self_index, to_string(op.id) + " appended at index " +
                                          std::to_string(log.length() + 1));
  }
  if (!op.val.is_root()) {
    LogIndex parent = ndx(log, op.ref);
    if (parent == kInfinity) throw error(errc::ref_not_in_log, to_string(op.ref));
    if (op.val.is_tombstone() && !log.at(parent).val.is_char()) {
      throw error(errc::invalid_op, "tombstone must reference a character");
    }
  }
  return log.push_unchecked(op);
}

/// LOG_k: the set of the first k ids.
inline std::set<Timestamp> prefix_set(const ReplicaLog& log, LogIndex k) {
  if (k > log.length()) {
    throw error(errc::out_of_range, "prefix " + std::to_string(k) + " exceeds log length " +
                                        std::to_string(log.length()));
  }
  std::set<Timestamp> out;
  for (LogIndex i = 1; i <= k; ++i) out.insert(log.at(i).id);
  return out;
}

}  // namespace chronofold
