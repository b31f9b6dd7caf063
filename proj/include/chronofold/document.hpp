#pragma once

#include <cstddef>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "chronofold/costructures.hpp"
#include "chronofold/error.hpp"
#include "chronofold/op.hpp"
#include "chronofold/replica_log.hpp"
#include "chronofold/timestamp.hpp"

namespace chronofold {

/// <val, index of the weave successor>.
struct ChronofoldEntry {
  OpValue val;
  LogIndex next = kEnd;

  friend bool operator==(const ChronofoldEntry&, const ChronofoldEntry&) = default;
};

/// Append-only array in subjective log order whose `next` links embed the
/// weave. 1-based; entry 1 is the root.
class Chronofold {
 public:
  LogIndex length() const noexcept { return static_cast<LogIndex>(entries_.size()); }
  bool empty() const noexcept { return entries_.empty(); }

  const ChronofoldEntry& at(LogIndex j) const {
    if (j == 0 || j > length()) {
      throw error(errc::out_of_range, "chronofold index " + std::to_string(j));
    }
    return entries_[j - 1];
  }

  std::span<const ChronofoldEntry> entries() const noexcept { return entries_; }

  LogIndex append(const ChronofoldEntry& e) {
    entries_.push_back(e);
    return length();
  }

  void relink(LogIndex j, LogIndex next) { entries_[j - 1].next = next; }

  void reserve(std::size_t n) { entries_.reserve(n); }

 private:
  std::vector<ChronofoldEntry> entries_;
};

/// Forward range over log indices in weave order.
class WeaveView {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = LogIndex;
    using difference_type = std::ptrdiff_t;
    using pointer = const LogIndex*;
    using reference = LogIndex;

    iterator() = default;
    iterator(const Chronofold* cf, LogIndex at) : cf_(cf), at_(at) {}

    LogIndex operator*() const noexcept { return at_; }
    iterator& operator++() {
      at_ = cf_->at(at_).next;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) noexcept {
      return a.at_ == b.at_;
    }

   private:
    const Chronofold* cf_ = nullptr;
    LogIndex at_ = kEnd;
  };

  WeaveView(const Chronofold& cf, LogIndex start) : cf_(&cf), start_(start) {}

  iterator begin() const { return iterator(cf_, start_); }
  iterator end() const { return iterator(cf_, kEnd); }

 private:
  const Chronofold* cf_;
  LogIndex start_;
};

/// One replica's view of a versioned text: the chronofold, the full op log,
/// and the co-structures, always of equal length.
///
/// Single-writer: mutation must not overlap with any other access.
class Document {
 public:
  /// A replica with an empty log. The first merged op must be a root.
  explicit Document(Author self, unsigned drift_threshold = CoStructures::kDefaultDriftThreshold)
      : self_(self), log_(self), cs_(drift_threshold) {}

  /// Fresh document rooted at <1, creator>.
  static Document create(const Author& creator) {
    Document doc(creator);
    doc.merge(Op::make_root(creator));
    return doc;
  }

  const Author& author() const noexcept { return self_; }
  LogIndex length() const noexcept { return cf_.length(); }
  bool empty() const noexcept { return cf_.empty(); }

  const Chronofold& chronofold() const noexcept { return cf_; }
  const ReplicaLog& log() const noexcept { return log_; }
  const CoStructures& costructures() const noexcept { return cs_; }

  /// Types `ch` right after the entry at `after` (root or a live char).
  Op local_insert(LogIndex after, char32_t ch) {
    if (after == 0 || after > length()) {
      throw error(errc::invalid_anchor, "anchor " + std::to_string(after) + " out of range");
    }
    const OpValue& anchor = cf_.at(after).val;
    if (anchor.is_tombstone() || (anchor.is_char() && !cs_.is_live(after))) {
      throw error(errc::invalid_anchor, "anchor " + std::to_string(after) + " is not visible");
    }
    Op op{Timestamp{length() + 1, self_}, cs_.inverse_ndx(after), OpValue::character(ch)};
    append(op, after);
    return op;
  }

  /// Marks the live char at `target` deleted with a tombstone child.
  Op local_delete(LogIndex target) {
    if (target == 0 || target > length()) {
      throw error(errc::invalid_target, "target " + std::to_string(target) + " out of range");
    }
    if (!cf_.at(target).val.is_char() || !cs_.is_live(target)) {
      throw error(errc::invalid_target, "target " + std::to_string(target) + " is not a live char");
    }
    Op op{Timestamp{length() + 1, self_}, cs_.inverse_ndx(target), OpValue::tombstone()};
    append(op, target);
    return op;
  }

  /// Merges a (possibly remote) op. Its parent must already be present.
  /// Returns the new log index.
  LogIndex merge(const Op& op) {
    validate_shape(op);
    if (empty()) {
      if (!op.val.is_root()) {
        throw error(errc::ref_not_in_log, "no root yet for " + to_string(op.id));
      }
      append(op, 1);
      return 1;
    }
    if (op.val.is_root()) {
      throw error(op.id == log_.at(1).id ? errc::duplicate_id : errc::invalid_op,
                  "document already has a root");
    }
    if (contains(op.id)) throw error(errc::duplicate_id, to_string(op.id));
    if (op.id.author == self_ && op.id.andx != length() + 1) {
      throw error(errc::bad_self_index, to_string(op.id) + " would land at index " +
                                            std::to_string(length() + 1));
    }
    if (op.id.andx > length() + 1) {
      throw error(errc::invalid_op, "andx of " + to_string(op.id) + " exceeds its log index " +
                                        std::to_string(length() + 1));
    }
    const LogIndex parent = cs_.fast_ndx(op.ref);
    if (parent == kInfinity) throw error(errc::ref_not_in_log, to_string(op.ref));
    if (op.val.is_tombstone() && !cf_.at(parent).val.is_char()) {
      throw error(errc::invalid_op, "tombstone " + to_string(op.id) + " must target a char");
    }
    return append(op, parent);
  }

  bool contains(const Timestamp& t) { return cs_.fast_ndx(t) != kInfinity; }

  LogIndex fast_ndx(const Timestamp& t) { return cs_.fast_ndx(t); }
  Timestamp inverse_ndx(LogIndex j) const { return cs_.inverse_ndx(j); }

  WeaveView weave() const { return WeaveView(cf_, empty() ? kEnd : 1); }

  std::vector<LogIndex> weave_indices() const {
    std::vector<LogIndex> out;
    out.reserve(length());
    for (LogIndex j : weave()) out.push_back(j);
    return out;
  }

  /// Current visible text.
  std::u32string text() const {
    std::u32string out;
    for (LogIndex j : weave()) {
      if (cs_.is_live(j)) out.push_back(cf_.at(j).val.codepoint());
    }
    return out;
  }

  /// Log index of the n-th (0-based) visible char, or kInfinity.
  LogIndex visible_index(std::size_t n) const {
    for (LogIndex j : weave()) {
      if (cs_.is_live(j) && n-- == 0) return j;
    }
    return kInfinity;
  }

  void set_format(LogIndex from, LogIndex to, Attribute attr) { cs_.set_format(from, to, attr); }
  Attribute get_format(LogIndex j) const { return cs_.get_format(j); }

  /// Anchor from which weave iteration yields line `line_no` (1-based): the
  /// root for line 1, otherwise the newline that ends the previous line.
  LogIndex line_start(std::size_t line_no) {
    if (line_no == 0) throw error(errc::out_of_range, "lines are 1-based");
    if (line_no == 1) {
      if (empty()) throw error(errc::out_of_range, "empty document");
      return 1;
    }
    Toc& toc = cs_.toc();
    if (!toc.valid) rebuild_toc();
    if (line_no - 2 >= toc.newlines.size()) {
      throw error(errc::out_of_range, "line " + std::to_string(line_no) + " of " +
                                          std::to_string(toc.newlines.size() + 1));
    }
    return toc.newlines[line_no - 2];
  }

  /// Visible text of one line, without its terminating newline.
  std::u32string line(std::size_t line_no) {
    std::u32string out;
    for (LogIndex j = cf_.at(line_start(line_no)).next; j != kEnd; j = cf_.at(j).next) {
      if (!cs_.is_live(j)) continue;
      char32_t c = cf_.at(j).val.codepoint();
      if (c == U'\n') break;
      out.push_back(c);
    }
    return out;
  }

 private:
  // Appends op as entry length()+1 with its CT parent at `parent` and links
  // it after any preemptive siblings. Every entry following a preemptive
  // sibling inside that sibling's subtree also carries a greater timestamp,
  // so skipping while ATO-greater lands after the whole subtree.
  LogIndex append(const Op& op, LogIndex parent) {
    const LogIndex j = length() + 1;
    LogIndex prev = kEnd;
    LogIndex cursor = kEnd;
    if (!op.val.is_root()) {
      prev = parent;
      cursor = cf_.at(parent).next;
      while (cursor != kEnd && cs_.inverse_ndx(cursor) > op.id) {
        prev = cursor;
        cursor = cf_.at(cursor).next;
      }
    }
    cf_.append({op.val, cursor});
    log_.push_unchecked(op);
    cs_.record(op, op.val.is_root() ? j : parent);
    cs_.set_next(j, cursor);
    if (prev != kEnd) {
      cf_.relink(prev, j);
      cs_.set_next(prev, j);
    }
    if ((op.val.is_char() && op.val.codepoint() == U'\n') ||
        (op.val.is_tombstone() && cf_.at(parent).val.codepoint() == U'\n')) {
      cs_.toc().valid = false;
    }
    return j;
  }

  void rebuild_toc() {
    Toc& toc = cs_.toc();
    toc.newlines.clear();
    for (LogIndex j : weave()) {
      if (cs_.is_live(j) && cf_.at(j).val.codepoint() == U'\n') toc.newlines.push_back(j);
    }
    toc.valid = true;
  }

  Author self_;
  Chronofold cf_;
  ReplicaLog log_;
  CoStructures cs_;
};

inline Document new_document(const Author& creator) { return Document::create(creator); }

}  // namespace chronofold
