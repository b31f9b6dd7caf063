#pragma once

#include <cstdint>
#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chronofold/causality.hpp"
#include "chronofold/oracle.hpp"
#include "chronofold/scenario.hpp"
#include "chronofold/versions.hpp"

namespace chronofold {

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::size_t replicas = 3;
  std::size_t ops = 100;
  /// Also compare every prefix version against the oracle (quadratic).
  bool check_prefixes = true;
  /// Additional invariant, for harness self-tests. Returns failure messages.
  std::function<std::vector<std::string>(const ScenarioRunner&)> extra_check;
};

struct FuzzReport {
  FuzzConfig config;
  bool passed = true;
  std::vector<std::string> failures;
  Scenario scenario;        // as generated
  Scenario counterexample;  // minimized, empty when passed
};

namespace detail {

// Modulo draws straight from the engine.
class FuzzRng {
 public:
  explicit FuzzRng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// The full invariant suite over a finished run: convergence, oracle
/// equality, axioms, index agreement, weave integrity and (optionally)
/// the prefix-version property.
inline std::vector<std::string> check_invariants(const ScenarioRunner& runner,
                                                 bool check_prefixes = true) {
  std::vector<std::string> out;
  const auto& slots = runner.slots();
  if (slots.empty()) return out;

  std::vector<ReplicaLog> logs;
  std::map<Timestamp, Op> union_ops;
  for (const auto& s : slots) {
    if (s.rebased) continue;
    logs.push_back(s.replica.doc.log());
    for (const Op& op : s.replica.doc.log().entries()) union_ops.emplace(op.id, op);
  }
  for (const auto& v : check_axioms(logs)) {
    std::ostringstream os;
    os << v;
    out.push_back(os.str());
  }

  std::vector<Op> all_ops;
  for (const auto& [id, op] : union_ops) all_ops.push_back(op);
  std::u32string expected;
  try {
    expected = oracle::text(all_ops);
  } catch (const error& e) {
    out.push_back(std::string("oracle rejected union op set: ") + e.what());
    return out;
  }

  for (const auto& s : slots) {
    if (s.rebased) continue;
    // Work on a copy: fast_ndx may record shift-table hints.
    Document doc = s.replica.doc;
    const std::string who = "replica " + s.name + ": ";
    if (doc.length() != all_ops.size()) {
      out.push_back(who + "holds " + std::to_string(doc.length()) + " of " +
                    std::to_string(all_ops.size()) + " ops after the closing syncs");
    } else if (doc.text() != expected) {
      out.push_back(who + "text " + quote(doc.text()) + " != oracle " + quote(expected));
    }
    const ReplicaLog& log = doc.log();
    const auto& cs = doc.costructures();

    std::vector<bool> seen(doc.length() + 1, false);
    std::size_t visited = 0;
    for (LogIndex j : doc.weave()) {
      if (j == 0 || j > doc.length() || seen[j]) {
        out.push_back(who + "weave revisits or leaves the log at " + std::to_string(j));
        break;
      }
      seen[j] = true;
      ++visited;
    }
    if (visited != doc.length()) out.push_back(who + "weave is not a permutation");

    LogIndex via_map = 1;
    for (LogIndex j : doc.weave()) {
      if (via_map != j) {
        out.push_back(who + "NextMap traversal diverges at " + std::to_string(j));
        break;
      }
      via_map = cs.next_lookup(j);
    }

    for (LogIndex j = 1; j <= doc.length(); ++j) {
      const Op& op = log.at(j);
      if (cs.inverse_ndx(j) != op.id) {
        out.push_back(who + "inverse_ndx(" + std::to_string(j) + ") != recorded id");
      }
      if (cs.inverse_ndx(cs.parent(j)) != op.ref) {
        out.push_back(who + "RefMap wrong at " + std::to_string(j));
      }
      const LogIndex fast = doc.fast_ndx(op.id);
      if (fast != j || ndx(log, op.id) != j) {
        out.push_back(who + "fast_ndx(" + to_string(op.id) + ") = " + std::to_string(fast) +
                      ", expected " + std::to_string(j));
      }
    }

    if (check_prefixes) {
      std::vector<Op> prefix;
      for (LogIndex k = 1; k <= doc.length(); ++k) {
        prefix.push_back(log.at(k));
        if (render_version(doc, Version{k}) != oracle::text(prefix)) {
          out.push_back(who + "version " + std::to_string(k) + " differs from oracle");
          break;
        }
      }
    }
  }
  return out;
}

namespace detail {

// Every ordered pair of declared replicas, twice.
inline std::vector<Command> closing_syncs(const Scenario& sc) {
  std::vector<std::string> names;
  for (const auto& c : sc.commands) {
    if (c.kind == Command::Kind::replica) names.push_back(c.name);
  }
  std::vector<Command> out;
  for (int round = 0; round < 2; ++round) {
    for (const auto& a : names) {
      for (const auto& b : names) {
        if (a == b) continue;
        Command c;
        c.kind = Command::Kind::sync;
        c.name = a;
        c.target = b;
        out.push_back(c);
      }
    }
  }
  return out;
}

inline bool same_command(Command a, const Command& b) {
  a.line = b.line;
  return a == b;
}

}  // namespace detail

/// Generates a random schedule of inserts, deletes and one-way syncs while
/// executing it, then syncs every ordered pair twice so all replicas hold the
/// union. Returns the runner in its final state and the scenario it ran.
inline Scenario generate_and_run(const FuzzConfig& cfg, ScenarioRunner& runner) {
  detail::FuzzRng rng(cfg.seed);
  Scenario sc;
  auto exec = [&](Command c) {
    c.line = sc.commands.size() + 1;
    auto o = runner.execute(c);
    if (o.status == Outcome::Status::error) {
      throw error(errc::invalid_op, "generator produced a failing command: " + o.detail);
    }
    sc.commands.push_back(std::move(c));
  };
  std::vector<std::string> names;
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    names.push_back("r" + std::to_string(r));
    Command c;
    c.kind = Command::Kind::replica;
    c.name = names.back();
    exec(c);
  }
  static constexpr char32_t kAlphabet[] = U"abcdexyz \n";
  std::size_t budget = cfg.ops;
  while (budget > 0) {
    if (cfg.replicas > 1 && rng.chance(30)) {
      Command c;
      c.kind = Command::Kind::sync;
      std::size_t a = rng.below(cfg.replicas);
      std::size_t b = (a + 1 + rng.below(cfg.replicas - 1)) % cfg.replicas;
      c.name = names[a];
      c.target = names[b];
      if (rng.chance(30)) c.limit = 1 + rng.below(5);
      exec(c);
      continue;
    }
    const std::string& who = names[rng.below(cfg.replicas)];
    const std::size_t len = runner.slot(who).replica.doc.text().size();
    Command c;
    c.name = who;
    if (len > 0 && rng.chance(35)) {
      c.kind = Command::Kind::erase;
      c.pos = rng.below(len);
      c.len = std::min<std::size_t>({1 + rng.below(3), len - c.pos, budget});
      budget -= c.len;
    } else {
      c.kind = Command::Kind::insert;
      // Bias towards the ends and the middle.
      std::size_t pick = rng.below(4);
      c.pos = pick == 0 ? 0 : pick == 1 ? len : pick == 2 ? len / 2 : rng.below(len + 1);
      std::size_t n = std::min<std::size_t>(1 + rng.below(4), budget);
      for (std::size_t k = 0; k < n; ++k) {
        c.text.push_back(kAlphabet[rng.below(std::size(kAlphabet) - 1)]);
      }
      budget -= n;
    }
    exec(c);
  }
  for (Command c : detail::closing_syncs(sc)) exec(std::move(c));
  return sc;
}

namespace detail {

// Failing means: runs without runtime errors and violates an invariant.
inline bool reproduces(const Scenario& sc, const FuzzConfig& cfg) {
  ScenarioRunner runner;
  for (const auto& c : sc.commands) {
    if (runner.execute(c).status == Outcome::Status::error) return false;
  }
  auto failures = check_invariants(runner, cfg.check_prefixes);
  if (cfg.extra_check) {
    auto extra = cfg.extra_check(runner);
    failures.insert(failures.end(), extra.begin(), extra.end());
  }
  return !failures.empty();
}

}  // namespace detail

/// Removes commands one at a time while the scenario keeps failing. The
/// closing syncs are set aside first and re-derived for every candidate.
inline Scenario minimize(Scenario sc, const FuzzConfig& cfg) {
  auto with_closing = [](Scenario body) {
    for (Command c : detail::closing_syncs(body)) body.commands.push_back(std::move(c));
    return body;
  };
  const auto tail = detail::closing_syncs(sc);
  if (sc.commands.size() >= tail.size() &&
      std::equal(tail.begin(), tail.end(), sc.commands.end() - static_cast<std::ptrdiff_t>(tail.size()),
                 [](const Command& a, const Command& b) { return detail::same_command(a, b); })) {
    sc.commands.resize(sc.commands.size() - tail.size());
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = sc.commands.size(); i-- > 0;) {
      Scenario trial = sc;
      trial.commands.erase(trial.commands.begin() + static_cast<std::ptrdiff_t>(i));
      if (detail::reproduces(with_closing(trial), cfg)) {
        sc = std::move(trial);
        progress = true;
      }
    }
  }
  sc = with_closing(std::move(sc));
  for (std::size_t i = 0; i < sc.commands.size(); ++i) sc.commands[i].line = i + 1;
  return sc;
}

inline FuzzReport fuzz(const FuzzConfig& cfg) {
  FuzzReport report;
  report.config = cfg;
  ScenarioRunner runner;
  report.scenario = generate_and_run(cfg, runner);
  report.failures = check_invariants(runner, cfg.check_prefixes);
  if (cfg.extra_check) {
    auto extra = cfg.extra_check(runner);
    report.failures.insert(report.failures.end(), extra.begin(), extra.end());
  }
  report.passed = report.failures.empty();
  if (!report.passed) report.counterexample = minimize(report.scenario, cfg);
  return report;
}

inline std::string format_report(const FuzzReport& r) {
  std::string out = "seed " + std::to_string(r.config.seed) + " replicas " +
                    std::to_string(r.config.replicas) + " ops " + std::to_string(r.config.ops) +
                    " commands " + std::to_string(r.scenario.commands.size()) + ": " +
                    (r.passed ? "PASS" : "FAIL") + '\n';
  for (const auto& f : r.failures) out += "  " + f + '\n';
  if (!r.passed) {
    out += "minimized counterexample:\n";
    out += to_string(r.counterexample);
  }
  return out;
}

}  // namespace chronofold
