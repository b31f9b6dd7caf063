#pragma once

#include <cstddef>
#include <iterator>
#include <map>
#include <string>
#include <utility>

#include "chronofold/error.hpp"
#include "chronofold/timestamp.hpp"

namespace chronofold {

/// Run-length map over log indices [1, length], grown by appending one index
/// at a time. A new span starts only where the value changes.
template <typename V>
class SpanMap {
 public:
  using map_type = std::map<LogIndex, V>;

  LogIndex length() const noexcept { return length_; }
  std::size_t span_count() const noexcept { return spans_.size(); }
  const map_type& spans() const noexcept { return spans_; }

  void append(const V& value) {
    ++length_;
    if (spans_.empty() || !(std::prev(spans_.end())->second == value)) {
      spans_.emplace_hint(spans_.end(), length_, value);
    }
  }

  const V& at(LogIndex j) const {
    if (j == 0 || j > length_) {
      throw error(errc::out_of_range, "span map index " + std::to_string(j));
    }
    return std::prev(spans_.upper_bound(j))->second;
  }

  /// Start of the span holding j.
  LogIndex span_start(LogIndex j) const { return std::prev(spans_.upper_bound(j))->first; }

  /// First index > j where a new span begins, or length + 1.
  LogIndex span_end(LogIndex j) const {
    auto it = spans_.upper_bound(j);
    return it == spans_.end() ? length_ + 1 : it->first;
  }

 private:
  map_type spans_;
  LogIndex length_ = 0;
};

/// Sparse map of index -> index with an implicit default of j + Offset.
/// Only non-default values are stored.
template <int Offset>
class SparseIndexMap {
 public:
  using map_type = std::map<LogIndex, LogIndex>;

  static constexpr LogIndex default_for(LogIndex j) noexcept {
    return static_cast<LogIndex>(static_cast<std::int64_t>(j) + Offset);
  }

  LogIndex get(LogIndex j) const {
    auto it = stored_.find(j);
    return it == stored_.end() ? default_for(j) : it->second;
  }

  void set(LogIndex j, LogIndex value) {
    if (value == default_for(j)) {
      stored_.erase(j);
    } else {
      stored_.insert_or_assign(j, value);
    }
  }

  std::size_t entry_count() const noexcept { return stored_.size(); }
  const map_type& entries() const noexcept { return stored_; }

 private:
  map_type stored_;
};

/// Partition of [1, ∞) into semi-intervals [a_i, a_{i+1}) of uniform
/// attribute. Indices never covered by a set() carry A{}.
template <typename A>
class FormatRangeMap {
 public:
  using map_type = std::map<LogIndex, A>;

  FormatRangeMap() { spans_.emplace(1, A{}); }

  /// Applies attr to [from, to). Neighbouring equal spans are merged.
  void set(LogIndex from, LogIndex to, const A& attr) {
    if (from == 0 || to <= from) {
      throw error(errc::out_of_range, "format range [" + std::to_string(from) + "," +
                                          std::to_string(to) + ")");
    }
    A after = get(to);
    auto first = spans_.lower_bound(from);
    auto last = spans_.lower_bound(to);
    spans_.erase(first, last);
    spans_.insert_or_assign(from, attr);
    spans_.insert_or_assign(to, after);
    coalesce(from);
    coalesce(to);
  }

  const A& get(LogIndex j) const { return std::prev(spans_.upper_bound(j))->second; }

  std::size_t span_count() const noexcept { return spans_.size(); }
  const map_type& spans() const noexcept { return spans_; }

 private:
  // Drop the span starting at key if it repeats its predecessor's value.
  void coalesce(LogIndex key) {
    auto it = spans_.find(key);
    if (it == spans_.end() || it == spans_.begin()) return;
    if (std::prev(it)->second == it->second) spans_.erase(it);
  }

  map_type spans_;
};

}  // namespace chronofold
