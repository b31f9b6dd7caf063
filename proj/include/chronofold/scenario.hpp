#pragma once

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chronofold/document.hpp"
#include "chronofold/dump.hpp"
#include "chronofold/error.hpp"
#include "chronofold/rebase.hpp"
#include "chronofold/sync.hpp"
#include "chronofold/utf8.hpp"

namespace chronofold {

/// Script command. Positions and lengths count visible characters.
struct Command {
  enum class Kind { replica, insert, erase, sync, expect, rebase };

  Kind kind = Kind::replica;
  std::string name;    // replica, or sync source
  std::string target;  // sync destination
  std::size_t pos = 0;
  std::size_t len = 0;
  std::optional<std::size_t> limit;  // sync: max ops per batch
  std::u32string text;
  std::size_t line = 0;

  friend bool operator==(const Command&, const Command&) = default;
};

struct Scenario {
  std::vector<Command> commands;
};

/// Parse failure with a 1-based source location.
class ParseError : public error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : error(errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Quoted-string escaping shared by the parser and the printers.
inline std::string quote(std::u32string_view text) {
  std::string out = "\"";
  for (char32_t c : text) {
    switch (c) {
      case U'"': out += "\\\""; break;
      case U'\\': out += "\\\\"; break;
      case U'\n': out += "\\n"; break;
      case U'\t': out += "\\t"; break;
      default: utf8::append(out, c);
    }
  }
  out += '"';
  return out;
}

inline std::string to_string(const Command& c) {
  switch (c.kind) {
    case Command::Kind::replica: return "replica " + c.name;
    case Command::Kind::insert:
      return "insert " + c.name + ' ' + std::to_string(c.pos) + ' ' + quote(c.text);
    case Command::Kind::erase:
      return "delete " + c.name + ' ' + std::to_string(c.pos) + ' ' + std::to_string(c.len);
    case Command::Kind::sync:
      return "sync " + c.name + ' ' + c.target + (c.limit ? ' ' + std::to_string(*c.limit) : "");
    case Command::Kind::expect: return "expect " + c.name + ' ' + quote(c.text);
    case Command::Kind::rebase: return "rebase " + c.name;
  }
  return {};
}

inline std::string to_string(const Scenario& s) {
  std::string out;
  for (const auto& c : s.commands) out += to_string(c) + '\n';
  return out;
}

namespace detail {

class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const { fail_at(at_, what); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    throw ParseError(line_no_, pos + 1, what);
  }

  /// Offset of the next token.
  std::size_t mark() {
    skip_space();
    return at_;
  }

  void skip_space() {
    while (at_ < s_.size() && (s_[at_] == ' ' || s_[at_] == '\t')) ++at_;
  }

  bool done() {
    skip_space();
    return at_ >= s_.size() || s_[at_] == '#';
  }

  std::string_view word(std::string_view what) {
    skip_space();
    std::size_t start = at_;
    while (at_ < s_.size() && s_[at_] != ' ' && s_[at_] != '\t') ++at_;
    if (start == at_) {
      at_ = start;
      fail("expected " + std::string(what));
    }
    return s_.substr(start, at_ - start);
  }

  std::string name() {
    skip_space();
    std::size_t start = at_;
    auto w = word("replica name");
    if (!Author::valid(w)) {
      at_ = start;
      fail("invalid replica name '" + std::string(w) + "'");
    }
    return std::string(w);
  }

  std::size_t number(std::string_view what) {
    skip_space();
    std::size_t start = at_;
    auto w = word(what);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) {
      at_ = start;
      fail("expected " + std::string(what) + ", got '" + std::string(w) + "'");
    }
    return v;
  }

  std::u32string quoted() {
    skip_space();
    if (at_ >= s_.size() || s_[at_] != '"') fail("expected a quoted string");
    ++at_;
    std::string raw;
    while (true) {
      if (at_ >= s_.size()) fail("unterminated string");
      char c = s_[at_];
      if (c == '"') {
        ++at_;
        break;
      }
      if (c == '\\') {
        if (at_ + 1 >= s_.size()) fail("dangling escape");
        char e = s_[at_ + 1];
        switch (e) {
          case 'n': raw += '\n'; break;
          case 't': raw += '\t'; break;
          case '\\': raw += '\\'; break;
          case '"': raw += '"'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        at_ += 2;
        continue;
      }
      raw += c;
      ++at_;
    }
    try {
      return utf8::decode(raw);
    } catch (const error&) {
      fail("string is not valid UTF-8");
    }
  }

 private:
  std::string_view s_;
  std::size_t line_no_;
  std::size_t at_ = 0;
};

}  // namespace detail

/// Parses the scenario DSL. Rejects references to undeclared replicas.
inline Scenario parse_scenario(std::string_view source) {
  Scenario out;
  std::map<std::string, bool, std::less<>> declared;
  std::size_t line_no = 0;
  std::size_t i = 0;
  while (i < source.size()) {
    std::size_t nl = source.find('\n', i);
    if (nl == std::string_view::npos) nl = source.size();
    std::string_view line = source.substr(i, nl - i);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    i = nl + 1;
    ++line_no;

    detail::LineLexer lex(line, line_no);
    if (lex.done()) continue;
    Command c;
    c.line = line_no;
    auto known = [&] {
      const std::size_t at = lex.mark();
      std::string name = lex.name();
      if (!declared.contains(name)) lex.fail_at(at, "undeclared replica '" + name + "'");
      return name;
    };
    const std::size_t verb_at = lex.mark();
    std::string_view verb = lex.word("command");
    if (verb == "replica") {
      c.kind = Command::Kind::replica;
      const std::size_t at = lex.mark();
      c.name = lex.name();
      if (declared.contains(c.name)) lex.fail_at(at, "replica '" + c.name + "' declared twice");
      declared.emplace(c.name, true);
    } else if (verb == "insert") {
      c.kind = Command::Kind::insert;
      c.name = known();
      c.pos = lex.number("position");
      c.text = lex.quoted();
      if (c.text.empty()) lex.fail("nothing to insert");
    } else if (verb == "delete") {
      c.kind = Command::Kind::erase;
      c.name = known();
      c.pos = lex.number("position");
      c.len = lex.number("length");
      if (c.len == 0) lex.fail("delete length must be positive");
    } else if (verb == "sync") {
      c.kind = Command::Kind::sync;
      c.name = known();
      c.target = known();
      if (c.name == c.target) lex.fail("cannot sync a replica with itself");
      if (!lex.done()) c.limit = lex.number("batch limit");
    } else if (verb == "expect") {
      c.kind = Command::Kind::expect;
      c.name = known();
      c.text = lex.quoted();
    } else if (verb == "rebase") {
      c.kind = Command::Kind::rebase;
      c.name = known();
    } else {
      lex.fail_at(verb_at, "unknown command '" + std::string(verb) + "'");
    }
    if (!lex.done()) lex.fail("unexpected trailing input");
    out.commands.push_back(std::move(c));
  }
  return out;
}

struct Outcome {
  enum class Status { ok, failed, error };

  Command command;
  Status status = Status::ok;
  std::string detail;
};

struct ReplicaSummary {
  std::string name;
  std::u32string text;
  std::string log;    // CFOP1 batch of the whole log
  std::string weave;  // one "<ndx> <val>" line per entry
};

/// Deterministic record of a run: one outcome per executed command, then
/// the final state of each replica in declaration order.
struct Transcript {
  std::vector<Outcome> outcomes;
  std::vector<ReplicaSummary> replicas;

  bool passed() const {
    for (const auto& o : outcomes) {
      if (o.status != Outcome::Status::ok) return false;
    }
    return true;
  }
  bool has_error() const {
    for (const auto& o : outcomes) {
      if (o.status == Outcome::Status::error) return true;
    }
    return false;
  }
};

inline std::string format_transcript(const Transcript& t) {
  std::ostringstream os;
  for (const auto& o : t.outcomes) {
    os << '[' << o.command.line << "] " << to_string(o.command) << "  ";
    switch (o.status) {
      case Outcome::Status::ok: os << "ok"; break;
      case Outcome::Status::failed: os << "FAIL: " << o.detail; break;
      case Outcome::Status::error: os << "ERROR: " << o.detail; break;
    }
    if (o.status == Outcome::Status::ok && !o.detail.empty()) os << " (" << o.detail << ')';
    os << '\n';
  }
  for (const auto& r : t.replicas) {
    os << "== replica " << r.name << '\n';
    os << "text " << quote(r.text) << '\n';
    os << "log\n" << r.log;
    os << "weave\n" << r.weave;
  }
  os << "RESULT " << (t.passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

/// Executes commands one at a time against a set of named replicas. The
/// first declared replica creates the document root; later ones start from
/// that same root.
class ScenarioRunner {
 public:
  struct Slot {
    std::string name;
    Replica replica;
    bool rebased = false;
  };

  /// Runs one command. Failed expectations are reported in the outcome;
  /// runtime problems (bad positions, rejected batches) become errors.
  Outcome execute(const Command& c) {
    Outcome out{c, Outcome::Status::ok, {}};
    try {
      run(c, out);
    } catch (const error& e) {
      out.status = Outcome::Status::error;
      out.detail = e.what();
    }
    return out;
  }

  std::vector<Slot>& slots() noexcept { return slots_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  Slot& slot(const std::string& name) {
    for (auto& s : slots_) {
      if (s.name == name) return s;
    }
    throw error(errc::out_of_range, "undeclared replica '" + name + "'");
  }

  std::vector<ReplicaSummary> summaries() const {
    std::vector<ReplicaSummary> out;
    for (const auto& s : slots_) {
      out.push_back({s.name, s.replica.doc.text(), dump(s.replica.doc, DumpWhat::log),
                     dump(s.replica.doc, DumpWhat::weave)});
    }
    return out;
  }

 private:
  void run(const Command& c, Outcome& out) {
    using K = Command::Kind;
    switch (c.kind) {
      case K::replica: {
        for (const auto& s : slots_) {
          if (s.name == c.name) throw error(errc::invalid_op, "replica declared twice");
        }
        Author self(c.name);
        if (slots_.empty()) {
          slots_.push_back({c.name, Replica(Document::create(self)), false});
        } else {
          Document doc(self);
          doc.merge(slots_.front().replica.doc.log().at(1));
          slots_.push_back({c.name, Replica(std::move(doc)), false});
        }
        break;
      }
      case K::insert: {
        Document& doc = slot(c.name).replica.doc;
        LogIndex anchor = 1;
        if (c.pos > 0) {
          anchor = doc.visible_index(c.pos - 1);
          if (anchor == kInfinity) {
            throw error(errc::out_of_range, "insert position " + std::to_string(c.pos) +
                                                " beyond text of length " +
                                                std::to_string(doc.text().size()));
          }
        }
        for (char32_t ch : c.text) {
          doc.local_insert(anchor, ch);
          anchor = doc.length();
        }
        break;
      }
      case K::erase: {
        Document& doc = slot(c.name).replica.doc;
        std::vector<LogIndex> targets;
        std::size_t seen = 0;
        for (LogIndex j : doc.weave()) {
          if (!doc.costructures().is_live(j)) continue;
          if (seen >= c.pos && seen < c.pos + c.len) targets.push_back(j);
          ++seen;
        }
        if (targets.size() != c.len) {
          throw error(errc::out_of_range, "delete [" + std::to_string(c.pos) + "," +
                                              std::to_string(c.pos + c.len) +
                                              ") beyond text of length " + std::to_string(seen));
        }
        for (LogIndex j : targets) doc.local_delete(j);
        break;
      }
      case K::sync: {
        Slot& from = slot(c.name);
        Slot& to = slot(c.target);
        if (from.rebased || to.rebased) {
          throw error(errc::invalid_op, "rebased replicas no longer share history");
        }
        std::size_t n = sync(from.replica, to.replica, c.limit);
        out.detail = std::to_string(n) + " merged";
        break;
      }
      case K::expect: {
        std::u32string actual = slot(c.name).replica.doc.text();
        if (actual != c.text) {
          out.status = Outcome::Status::failed;
          out.detail = "expected " + quote(c.text) + ", actual " + quote(actual);
        }
        break;
      }
      case K::rebase: {
        Slot& s = slot(c.name);
        s.replica = Replica(rebase(s.replica.doc));
        s.rebased = true;
        break;
      }
    }
  }

  std::vector<Slot> slots_;
};

/// Runs every command in order, stopping at the first runtime error.
inline Transcript run_script(const Scenario& scenario) {
  Transcript t;
  ScenarioRunner runner;
  for (const auto& c : scenario.commands) {
    t.outcomes.push_back(runner.execute(c));
    if (t.outcomes.back().status == Outcome::Status::error) break;
  }
  t.replicas = runner.summaries();
  return t;
}

}  // namespace chronofold
