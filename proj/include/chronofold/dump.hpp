#pragma once

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chronofold/document.hpp"
#include "chronofold/error.hpp"
#include "chronofold/sync.hpp"
#include "chronofold/utf8.hpp"
#include "chronofold/wire.hpp"

namespace chronofold {

enum class DumpWhat { text, log, weave, chronofold, costructures };

inline DumpWhat parse_dump_what(std::string_view s) {
  if (s == "text") return DumpWhat::text;
  if (s == "log") return DumpWhat::log;
  if (s == "weave") return DumpWhat::weave;
  if (s == "chronofold") return DumpWhat::chronofold;
  if (s == "costructures") return DumpWhat::costructures;
  throw error(errc::parse_error, "unknown dump selector '" + std::string(s) + "'");
}

namespace detail {

inline void dump_costructures(const Document& doc, std::string& out) {
  const auto& cs = doc.costructures();
  auto section = [&](std::string_view name, std::size_t n) {
    out += name;
    out += ' ';
    out += std::to_string(n);
    out += '\n';
  };
  auto pair = [&](auto a, const std::string& b) {
    out += std::to_string(a);
    out += ' ';
    out += b;
    out += '\n';
  };
  section("AUTHORS", cs.authors().span_count());
  for (const auto& [start, a] : cs.authors().spans()) pair(start, a.str());
  section("SHIFTS", cs.shifts().span_count());
  for (const auto& [start, s] : cs.shifts().spans()) pair(start, std::to_string(s));
  section("REFS", cs.refs().entry_count());
  for (const auto& [j, p] : cs.refs().entries()) pair(j, std::to_string(p));
  std::vector<LogIndex> newlines;
  for (LogIndex j : doc.weave()) {
    if (cs.is_live(j) && doc.chronofold().at(j).val.codepoint() == U'\n') newlines.push_back(j);
  }
  section("TOC", newlines.size());
  for (std::size_t k = 0; k < newlines.size(); ++k) pair(k + 2, std::to_string(newlines[k]));
  section("FORMAT", cs.format().span_count());
  for (const auto& [start, attr] : cs.format().spans()) pair(start, std::to_string(attr));
}

}  // namespace detail

/// Stable, line-oriented rendering of one aspect of a document. The
/// `chronofold` selector is the full CFLD1 form accepted by load_document().
inline std::string dump(const Document& doc, DumpWhat what) {
  std::string out;
  switch (what) {
    case DumpWhat::text:
      out = utf8::encode(doc.text());
      out += '\n';
      break;
    case DumpWhat::log:
      out = encode_batch(ops_since(doc, 0));
      break;
    case DumpWhat::weave:
      for (LogIndex j : doc.weave()) {
        out += std::to_string(j) + ' ' + wire::encode_value(doc.chronofold().at(j).val) + '\n';
      }
      break;
    case DumpWhat::chronofold:
      out = "CFLD1 " + doc.author().str() + ' ' + std::to_string(doc.length()) + '\n';
      for (LogIndex j = 1; j <= doc.length(); ++j) {
        const auto& e = doc.chronofold().at(j);
        out += std::to_string(j) + ' ' + wire::encode_value(e.val) + ' ' + std::to_string(e.next) +
               '\n';
      }
      detail::dump_costructures(doc, out);
      break;
    case DumpWhat::costructures:
      detail::dump_costructures(doc, out);
      break;
  }
  return out;
}

/// Rebuilds a document from its CFLD1 dump by replaying the recovered ops,
/// then checks the replayed weave and ToC against the dump.
inline Document load_document(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t nl = text.find('\n', i);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(i, nl - i));
    i = nl + 1;
  }
  std::size_t at = 0;
  auto next_line = [&]() -> std::vector<std::string_view> {
    if (at >= lines.size()) throw error(errc::malformed_line, "truncated dump");
    return wire::split_fields(lines[at++]);
  };

  auto header = next_line();
  if (header.size() != 3 || header[0] != "CFLD1") {
    throw error(errc::malformed_line, "missing CFLD1 header");
  }
  const Author owner = wire::parse_author(header[1]);
  const LogIndex count = wire::parse_index(header[2], "entry count");

  std::vector<ChronofoldEntry> entries;
  entries.reserve(count);
  for (LogIndex j = 1; j <= count; ++j) {
    auto f = next_line();
    if (f.size() != 3 || wire::parse_index(f[0], "index") != j) {
      throw error(errc::malformed_line, "bad entry line " + std::to_string(j));
    }
    LogIndex next = f[2] == "0" ? kEnd : wire::parse_index(f[2], "next");
    entries.push_back({wire::decode_value(f[1]), next});
  }

  auto section = [&](std::string_view name) {
    auto f = next_line();
    if (f.size() != 2 || f[0] != name) {
      throw error(errc::malformed_line, "expected section " + std::string(name));
    }
    std::vector<std::pair<LogIndex, std::string_view>> rows;
    LogIndex n = f[1] == "0" ? 0 : wire::parse_index(f[1], "section size");
    for (LogIndex k = 0; k < n; ++k) {
      auto r = next_line();
      if (r.size() != 2) throw error(errc::malformed_line, "bad row in " + std::string(name));
      rows.emplace_back(wire::parse_index(r[0], "key"), r[1]);
    }
    return rows;
  };
  auto to_index = [](std::string_view s) {
    return s == "0" ? LogIndex{0} : wire::parse_index(s, "value");
  };

  std::map<LogIndex, Author> authors;
  for (auto [k, v] : section("AUTHORS")) authors.emplace(k, wire::parse_author(v));
  std::map<LogIndex, LogIndex> shifts;
  for (auto [k, v] : section("SHIFTS")) shifts.emplace(k, to_index(v));
  std::map<LogIndex, LogIndex> refs;
  for (auto [k, v] : section("REFS")) refs.emplace(k, to_index(v));
  std::vector<LogIndex> toc;
  for (auto [k, v] : section("TOC")) toc.push_back(to_index(v));
  std::vector<std::pair<LogIndex, Attribute>> format;
  for (auto [k, v] : section("FORMAT")) format.emplace_back(k, to_index(v));
  if (at < lines.size() && !(at + 1 == lines.size() && lines[at].empty())) {
    throw error(errc::malformed_line, "trailing data after FORMAT section");
  }

  auto span_value = [](const auto& m, LogIndex j, std::string_view what) {
    auto it = m.upper_bound(j);
    if (it == m.begin()) throw error(errc::malformed_line, std::string(what) + " does not cover " + std::to_string(j));
    return std::prev(it)->second;
  };
  auto id_at = [&](LogIndex j) {
    LogIndex shift = span_value(shifts, j, "SHIFTS");
    if (shift >= j) throw error(errc::malformed_line, "shift too large at " + std::to_string(j));
    return Timestamp{j - shift, span_value(authors, j, "AUTHORS")};
  };

  Document doc(owner);
  for (LogIndex j = 1; j <= count; ++j) {
    auto r = refs.find(j);
    LogIndex parent = r == refs.end() ? j - 1 : r->second;
    if (parent == 0 || parent > j) throw error(errc::malformed_line, "bad parent at " + std::to_string(j));
    doc.merge(Op{id_at(j), id_at(parent), entries[j - 1].val});
  }
  for (LogIndex j = 1; j <= count; ++j) {
    if (doc.chronofold().at(j).next != entries[j - 1].next) {
      throw error(errc::malformed_line, "weave link of entry " + std::to_string(j) +
                                            " disagrees with the replayed log");
    }
  }
  for (std::size_t k = 0; k < format.size(); ++k) {
    if (format[k].second == 0) continue;
    LogIndex to = k + 1 < format.size() ? format[k + 1].first : doc.length() + 1;
    doc.set_format(format[k].first, to, format[k].second);
  }
  for (std::size_t k = 0; k < toc.size(); ++k) {
    if (doc.line_start(k + 2) != toc[k]) throw error(errc::malformed_line, "TOC disagrees with weave");
  }
  return doc;
}

}  // namespace chronofold
