#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "chronofold/document.hpp"
#include "chronofold/error.hpp"

namespace chronofold {

/// A version is a prefix of the local log, named by its length.
struct Version {
  LogIndex k = 1;
};

/// Range replacement in the old version's visible text.
struct Splice {
  std::size_t pos = 0;
  std::size_t delete_len = 0;
  std::u32string insert;

  friend bool operator==(const Splice&, const Splice&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Splice& s) {
  return os << "{pos " << s.pos << ", delete " << s.delete_len << ", insert "
            << s.insert.size() << " chars}";
}

namespace detail {

inline void check_version(const Document& doc, Version v) {
  if (v.k == 0 || v.k > doc.length()) {
    throw error(errc::out_of_range, "version " + std::to_string(v.k) + " outside [1," +
                                        std::to_string(doc.length()) + "]");
  }
}

// Char at j is visible in the version of length k.
inline bool live_at(const Document& doc, LogIndex j, LogIndex k) {
  return j <= k && doc.chronofold().at(j).val.is_char() &&
         doc.costructures().killed_at(j) > k;
}

}  // namespace detail

/// Text as it was after the first v.k ops of this replica's log: one weave
/// pass ignoring everything born or killed past k.
inline std::u32string render_version(const Document& doc, Version v) {
  detail::check_version(doc, v);
  std::u32string out;
  for (LogIndex j : doc.weave()) {
    if (detail::live_at(doc, j, v.k)) out.push_back(doc.chronofold().at(j).val.codepoint());
  }
  return out;
}

/// Minimal left-to-right splices turning version `from` into version `to`.
/// Positions refer to the text of `from`; adjacent edits are coalesced.
inline std::vector<Splice> diff_versions(const Document& doc, Version from, Version to) {
  detail::check_version(doc, from);
  detail::check_version(doc, to);
  if (from.k > to.k) {
    throw error(errc::out_of_range, "diff needs from <= to, got " + std::to_string(from.k) +
                                        " > " + std::to_string(to.k));
  }
  std::vector<Splice> out;
  Splice pending;
  bool open = false;
  std::size_t pos = 0;
  for (LogIndex j : doc.weave()) {
    const bool before = detail::live_at(doc, j, from.k);
    const bool after = detail::live_at(doc, j, to.k);
    if (before && after) {
      if (open) {
        out.push_back(std::move(pending));
        pending = Splice{};
        open = false;
      }
      ++pos;
      continue;
    }
    if (before == after) continue;
    if (!open) {
      pending.pos = pos;
      open = true;
    }
    if (before) {
      ++pending.delete_len;
      ++pos;
    } else {
      pending.insert.push_back(doc.chronofold().at(j).val.codepoint());
    }
  }
  if (open) out.push_back(std::move(pending));
  return out;
}

/// Applies splices sorted by position, each expressed in original coordinates.
inline std::u32string apply_splices(std::u32string_view text, std::span<const Splice> splices) {
  std::u32string out;
  std::size_t cursor = 0;
  for (const Splice& s : splices) {
    if (s.pos < cursor || s.pos + s.delete_len > text.size()) {
      throw error(errc::out_of_range, "splice at " + std::to_string(s.pos) + " does not fit");
    }
    out.append(text.substr(cursor, s.pos - cursor));
    out.append(s.insert);
    cursor = s.pos + s.delete_len;
  }
  out.append(text.substr(cursor));
  return out;
}

}  // namespace chronofold
