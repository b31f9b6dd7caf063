#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chronofold/error.hpp"
#include "chronofold/replica_log.hpp"

namespace chronofold {

struct AxiomViolation {
  int axiom = 0;  // 1, 2 or 3
  Author process;
  LogIndex index = 0;
  std::string description;
};

inline std::ostream& operator<<(std::ostream& os, const AxiomViolation& v) {
  return os << "axiom " << v.axiom << " at " << v.process << '^' << v.index << ": "
            << v.description;
}

namespace detail {

inline std::map<Author, const ReplicaLog*> logs_by_author(std::span<const ReplicaLog> logs) {
  std::map<Author, const ReplicaLog*> out;
  for (const auto& log : logs) out.emplace(log.author(), &log);
  return out;
}

inline std::unordered_map<Timestamp, const Op*> op_table(std::span<const ReplicaLog> logs) {
  std::unordered_map<Timestamp, const Op*> out;
  for (const auto& log : logs) {
    for (const auto& op : log.entries()) out.emplace(op.id, &op);
  }
  return out;
}

}  // namespace detail

/// s ⊑ t: a chain from s to t where each step is a ref edge or membership of
/// the earlier element in LOG_andx(next)(auth(next)). Brute-force backward
/// search from t; intended for tests.
inline bool causally_precedes(std::span<const ReplicaLog> logs, const Timestamp& s,
                              const Timestamp& t) {
  auto ops = detail::op_table(logs);
  if (!ops.contains(s)) throw error(errc::unknown_timestamp, to_string(s));
  if (!ops.contains(t)) throw error(errc::unknown_timestamp, to_string(t));
  auto by_author = detail::logs_by_author(logs);

  std::unordered_set<Timestamp> seen{t};
  std::deque<Timestamp> frontier{t};
  while (!frontier.empty()) {
    Timestamp cur = frontier.front();
    frontier.pop_front();
    if (cur == s) return true;
    auto visit = [&](const Timestamp& p) {
      if (seen.insert(p).second) frontier.push_back(p);
    };
    visit(ops.at(cur)->ref);
    if (auto it = by_author.find(cur.author); it != by_author.end()) {
      const ReplicaLog& own = *it->second;
      LogIndex upto = std::min(cur.andx, own.length());
      for (LogIndex k = 1; k <= upto; ++k) visit(own.at(k).id);
    }
  }
  return false;
}

/// Definition-level checker for the three RCT axioms over every process and
/// every prefix. Returns all violations found; empty means the logs form a
/// valid replicated causal tree.
inline std::vector<AxiomViolation> check_axioms(std::span<const ReplicaLog> logs) {
  std::vector<AxiomViolation> out;
  auto by_author = detail::logs_by_author(logs);

  // Positions of each id per log; injectivity and consistent definitions.
  std::map<Author, std::unordered_map<Timestamp, LogIndex>> pos;
  std::unordered_map<Timestamp, Op> defs;
  for (const auto& log : logs) {
    auto& p = pos[log.author()];
    if (by_author.at(log.author()) != &log) {
      out.push_back({1, log.author(), 0, "more than one log for this process"});
    }
    for (LogIndex i = 1; i <= log.length(); ++i) {
      const Op& op = log.at(i);
      if (!p.emplace(op.id, i).second) {
        out.push_back({1, log.author(), i, "log is not injective: " + to_string(op.id) +
                                               " repeats"});
      }
      auto [it, fresh] = defs.emplace(op.id, op);
      if (!fresh && !(it->second == op)) {
        out.push_back({2, log.author(), i, "conflicting definitions of " + to_string(op.id)});
      }
    }
  }

  // Deterministic iteration over T.
  std::vector<Timestamp> ids;
  ids.reserve(defs.size());
  for (const auto& [t, op] : defs) ids.push_back(t);
  std::sort(ids.begin(), ids.end());

  for (const Timestamp& t : ids) {
    auto log_it = by_author.find(t.author);
    if (log_it == by_author.end()) {
      out.push_back({1, t.author, t.andx, "process " + t.author.str() + " has no log"});
      continue;
    }
    const ReplicaLog& own = *log_it->second;
    // Axiom 1: <n,α> ∈ T ⇒ n ≤ lh(α) and α^n = <n,α>.
    if (t.andx > own.length() || own.at(t.andx).id != t) {
      out.push_back({1, t.author, t.andx,
                     to_string(t) + " is not at index " + std::to_string(t.andx) +
                         " of its author's log"});
    }
    // Axiom 2: ref(<n,α>) = α^j for some j ≤ n.
    const Timestamp& ref = defs.at(t).ref;
    auto& own_pos = pos.at(t.author);
    auto rp = own_pos.find(ref);
    if (rp == own_pos.end() || rp->second > t.andx) {
      out.push_back({2, t.author, t.andx,
                     "ref " + to_string(ref) + " of " + to_string(t) +
                         " is not within the first " + std::to_string(t.andx) +
                         " entries of its author's log"});
    }
  }

  // Axiom 3: α^i = <m,β> ⇒ LOG_m(β) ⊆ LOG_i(α).
  for (const auto& log : logs) {
    const auto& p = pos.at(log.author());
    // latest[β][k]: max position in this log of β^1..β^k (kInfinity if any absent).
    std::map<Author, std::vector<LogIndex>> latest;
    auto prefix_max = [&](const ReplicaLog& other) -> const std::vector<LogIndex>& {
      auto [it, fresh] = latest.try_emplace(other.author());
      if (fresh) {
        auto& v = it->second;
        v.assign(other.length() + 1, 0);
        for (LogIndex k = 1; k <= other.length(); ++k) {
          auto f = p.find(other.at(k).id);
          LogIndex here = f == p.end() ? kInfinity : f->second;
          v[k] = std::max(v[k - 1], here);
        }
      }
      return it->second;
    };
    for (LogIndex i = 1; i <= log.length(); ++i) {
      const Timestamp& t = log.at(i).id;
      auto other = by_author.find(t.author);
      if (other == by_author.end() || t.andx > other->second->length()) continue;
      const auto& pm = prefix_max(*other->second);
      if (pm[t.andx] > i) {
        const ReplicaLog& beta = *other->second;
        std::string missing;
        for (LogIndex k = 1; k <= t.andx; ++k) {
          auto f = p.find(beta.at(k).id);
          if (f == p.end() || f->second > i) {
            missing = to_string(beta.at(k).id);
            break;
          }
        }
        out.push_back({3, log.author(), i,
                       "LOG_" + std::to_string(t.andx) + "(" + t.author.str() +
                           ") not contained in LOG_" + std::to_string(i) + "(" +
                           log.author().str() + "): missing " + missing});
      }
    }
  }
  return out;
}

}  // namespace chronofold
