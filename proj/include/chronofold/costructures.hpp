#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronofold/error.hpp"
#include "chronofold/op.hpp"
#include "chronofold/range_map.hpp"
#include "chronofold/timestamp.hpp"

namespace chronofold {

/// Formatting attribute attached to log index ranges (bit flags by
/// convention; 0 is plain text).
using Attribute = std::uint32_t;

using AuthorRangeMap = SpanMap<Author>;
/// ndx - andx per span. The root span always has shift 0.
using ShiftRangeMap = SpanMap<LogIndex>;
/// Parent log index; absent keys mean j - 1. The root maps to itself.
using RefMap = SparseIndexMap<-1>;
/// Weave successor; absent keys mean j + 1. The tail stores kEnd.
using NextMap = SparseIndexMap<+1>;
using FormatMap = FormatRangeMap<Attribute>;

/// Per-author andx -> shift hints for fast_ndx, written once a lookup has
/// drifted more than the threshold. Derived data; can be dropped at any time.
class ForwardShiftTable {
 public:
  /// Greatest recorded <andx', shift'> with andx' <= andx, if any.
  std::optional<std::pair<LogIndex, LogIndex>> floor(const Author& a, LogIndex andx) const {
    auto it = table_.find(a);
    if (it == table_.end()) return std::nullopt;
    auto e = it->second.upper_bound(andx);
    if (e == it->second.begin()) return std::nullopt;
    --e;
    return *e;
  }

  void record(const Author& a, LogIndex andx, LogIndex shift) { table_[a][andx] = shift; }

  std::size_t entry_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [a, m] : table_) n += m.size();
    return n;
  }

  void clear() noexcept { table_.clear(); }

 private:
  std::map<Author, std::map<LogIndex, LogIndex>> table_;
};

/// Live newlines in weave order. Rebuilt lazily by the owning document.
struct Toc {
  std::vector<LogIndex> newlines;
  bool valid = false;
};

/// Index-keyed metadata kept beside the chronofold: timestamps via author and
/// shift spans, parent links, a thinned weave, liveness, formatting and ToC.
class CoStructures {
 public:
  static constexpr unsigned kDefaultDriftThreshold = 16;

  explicit CoStructures(unsigned drift_threshold = kDefaultDriftThreshold)
      : drift_threshold_(drift_threshold) {}

  LogIndex length() const noexcept { return authors_.length(); }

  /// Registers op as entry length()+1 whose CT parent sits at `parent`.
  void record(const Op& op, LogIndex parent) {
    const LogIndex j = length() + 1;
    authors_.append(op.id.author);
    shifts_.append(j - op.id.andx);
    refs_.set(j, parent);
    live_.push_back(op.val.is_char());
    auto& hw = high_water_[op.id.author];
    hw = std::max(hw, op.id.andx);
    if (op.val.is_tombstone()) {
      auto [it, fresh] = kills_.try_emplace(parent, j);
      if (!fresh) it->second = std::min(it->second, j);
      live_[parent - 1] = false;
    }
  }

  void set_next(LogIndex j, LogIndex next) { next_.set(j, next); }

  /// ndx⁻¹: two range-map lookups.
  Timestamp inverse_ndx(LogIndex j) const {
    check(j);
    return Timestamp{j - shifts_.at(j), authors_.at(j)};
  }

  /// ndx via the range maps: start from the best known lower bound and walk
  /// forward span by span. Records a shift-table hint when the walk was long.
  LogIndex fast_ndx(const Timestamp& t) {
    auto hw = high_water_.find(t.author);
    if (t.andx == 0 || hw == high_water_.end() || t.andx > hw->second) return kInfinity;

    LogIndex j = t.andx;
    if (auto hint = shift_table_.floor(t.author, t.andx)) {
      j = std::max(j, hint->first + hint->second);
    }
    unsigned steps = 0;
    LogIndex found = kInfinity;
    while (j <= length()) {
      ++steps;
      const LogIndex end = std::min(authors_.span_end(j), shifts_.span_end(j));
      if (!(authors_.at(j) == t.author)) {
        j = end;
        continue;
      }
      const LogIndex shift = shifts_.at(j);
      const LogIndex here = j - shift;
      if (here > t.andx) break;  // an author's ops appear in andx order
      const LogIndex candidate = t.andx + shift;
      if (candidate < end) {
        found = candidate;
        break;
      }
      j = end;
    }
    if (found != kInfinity && steps > drift_threshold_) {
      shift_table_.record(t.author, t.andx, found - t.andx);
    }
    return found;
  }

  /// Highest andx seen from `a`, 0 if none.
  LogIndex high_water(const Author& a) const {
    auto it = high_water_.find(a);
    return it == high_water_.end() ? 0 : it->second;
  }

  LogIndex parent(LogIndex j) const {
    check(j);
    return refs_.get(j);
  }

  LogIndex next_lookup(LogIndex j) const {
    check(j);
    return next_.get(j);
  }

  bool is_live(LogIndex j) const {
    check(j);
    return live_[j - 1];
  }

  /// Log index of the earliest tombstone targeting j, kInfinity if none.
  LogIndex killed_at(LogIndex j) const {
    auto it = kills_.find(j);
    return it == kills_.end() ? kInfinity : it->second;
  }

  void set_format(LogIndex from, LogIndex to, Attribute attr) {
    if (from == 0 || to <= from || to > length() + 1) {
      throw error(errc::out_of_range, "format range [" + std::to_string(from) + "," +
                                          std::to_string(to) + ") outside [1," +
                                          std::to_string(length() + 1) + ")");
    }
    format_.set(from, to, attr);
  }
  Attribute get_format(LogIndex j) const { return format_.get(j); }

  const AuthorRangeMap& authors() const noexcept { return authors_; }
  const ShiftRangeMap& shifts() const noexcept { return shifts_; }
  const RefMap& refs() const noexcept { return refs_; }
  const NextMap& next() const noexcept { return next_; }
  const FormatMap& format() const noexcept { return format_; }
  const ForwardShiftTable& shift_table() const noexcept { return shift_table_; }
  const std::vector<bool>& liveness() const noexcept { return live_; }

  Toc& toc() noexcept { return toc_; }
  const Toc& toc() const noexcept { return toc_; }

 private:
  void check(LogIndex j) const {
    if (j == 0 || j > length()) {
      throw error(errc::out_of_range, "log index " + std::to_string(j) + " outside [1," +
                                          std::to_string(length()) + "]");
    }
  }

  AuthorRangeMap authors_;
  ShiftRangeMap shifts_;
  RefMap refs_;
  NextMap next_;
  FormatMap format_;
  ForwardShiftTable shift_table_;
  std::map<Author, LogIndex> high_water_;
  std::map<LogIndex, LogIndex> kills_;
  std::vector<bool> live_;
  Toc toc_;
  unsigned drift_threshold_;
};

}  // namespace chronofold
