#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "chronofold/document.hpp"
#include "chronofold/error.hpp"
#include "chronofold/wire.hpp"

namespace chronofold {

/// What a receiver knows about one peer's log.
struct PeerState {
  Author peer;
  LogIndex known_length = 0;
  std::map<Author, LogIndex> high_water;
};

/// Raised when a batch is aborted; ops before the offending one stay applied.
class BatchError : public error {
 public:
  BatchError(errc code, const std::string& what, std::size_t applied, LogIndex sender_index)
      : error(code, what + " (sender index " + std::to_string(sender_index) + ")"),
        applied_(applied),
        sender_index_(sender_index) {}

  std::size_t applied() const noexcept { return applied_; }
  LogIndex sender_index() const noexcept { return sender_index_; }

 private:
  std::size_t applied_;
  LogIndex sender_index_;
};

/// The log postfix after index n, with timestamps recovered through the
/// co-structures. An optional limit truncates the batch (still a valid
/// causal prefix of the postfix).
inline OpBatch ops_since(const Document& doc, LogIndex n,
                         std::optional<std::size_t> limit = std::nullopt) {
  if (n > doc.length()) {
    throw error(errc::out_of_range, "ops_since " + std::to_string(n) + " beyond log length " +
                                        std::to_string(doc.length()));
  }
  OpBatch batch{doc.author(), n + 1, {}};
  LogIndex last = doc.length();
  if (limit && *limit < last - n) last = n + static_cast<LogIndex>(*limit);
  const auto& cs = doc.costructures();
  batch.ops.reserve(last - n);
  for (LogIndex j = n + 1; j <= last; ++j) {
    batch.ops.push_back(
        Op{cs.inverse_ndx(j), cs.inverse_ndx(cs.parent(j)), doc.chronofold().at(j).val});
  }
  return batch;
}

/// Validates and merges a batch in order. Already-known ids are skipped.
/// Admission checks: andx may not exceed the sender's index for it, the
/// sender's own ops must sit exactly at their andx, per-author andx may not
/// regress, and every ref must already be present.
inline std::size_t apply_batch(Document& doc, PeerState& peer, const OpBatch& batch) {
  std::size_t applied = 0;
  for (std::size_t k = 0; k < batch.ops.size(); ++k) {
    const Op& op = batch.ops[k];
    const LogIndex sender_ndx = batch.start_index + static_cast<LogIndex>(k);
    auto fail = [&](errc code, const std::string& what) {
      throw BatchError(code, what, applied, sender_ndx);
    };
    if (op.id.andx > sender_ndx) {
      fail(errc::out_of_order_index, to_string(op.id) + " cannot precede its author's index");
    }
    if (op.id.author == batch.sender && op.id.andx != sender_ndx) {
      fail(errc::bad_author_index, to_string(op.id) + " mislabeled by its own author");
    }
    const bool fresh_from_peer = sender_ndx > peer.known_length;
    if (fresh_from_peer) {
      auto hw = peer.high_water.find(op.id.author);
      if (hw != peer.high_water.end() && op.id.andx <= hw->second) {
        fail(errc::out_of_order_index, to_string(op.id) + " after andx " +
                                           std::to_string(hw->second) + " of the same author");
      }
    }
    const bool known = op.val.is_root() ? (!doc.empty() && doc.log().at(1).id == op.id)
                                        : (!doc.empty() && doc.contains(op.id));
    if (!known) {
      if (op.id.author == doc.author()) {
        fail(errc::bad_author_index, to_string(op.id) + " claims to be ours");
      }
      if (op.id.andx <= doc.costructures().high_water(op.id.author) && !doc.empty()) {
        fail(errc::out_of_order_index, to_string(op.id) + " arrived after a later op of " +
                                           op.id.author.str());
      }
      if (!op.val.is_root() && (doc.empty() || !doc.contains(op.ref))) {
        fail(errc::unknown_ref, to_string(op.id) + " references unknown " + to_string(op.ref));
      }
      try {
        doc.merge(op);
      } catch (const error& e) {
        fail(e.code(), e.what());
      }
      ++applied;
    }
    if (fresh_from_peer) {
      peer.known_length = sender_ndx;
      auto& hw = peer.high_water[op.id.author];
      hw = std::max(hw, op.id.andx);
    }
  }
  return applied;
}

/// A document plus the receiver-side state of each peer it syncs with.
struct Replica {
  Document doc;
  std::map<Author, PeerState> peers;

  explicit Replica(Document d) : doc(std::move(d)) {}

  PeerState& peer(const Author& a) {
    auto [it, fresh] = peers.try_emplace(a);
    if (fresh) it->second.peer = a;
    return it->second;
  }
};

/// One-way postfix exchange: `to` pulls whatever of `from`'s log it has not
/// consumed yet. Returns the number of newly merged ops.
inline std::size_t sync(const Replica& from, Replica& to,
                        std::optional<std::size_t> limit = std::nullopt) {
  PeerState& state = to.peer(from.doc.author());
  return apply_batch(to.doc, state, ops_since(from.doc, state.known_length, limit));
}

}  // namespace chronofold
