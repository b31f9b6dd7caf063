#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chronofold/error.hpp"
#include "chronofold/op.hpp"

namespace chronofold::oracle {

/// Canonical weave of an op set: depth-first from the root, children of every
/// node in descending timestamp order. Independent of any log order.
/// Throws NotCausallyClosed unless the set has one root and every ref present.
inline std::vector<Timestamp> weave(std::span<const Op> input) {
  std::vector<Op> ops(input.begin(), input.end());
  std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) { return a.id < b.id; });
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (ops[i].id == ops[i - 1].id) {
      throw error(errc::invalid_op, "conflicting definitions of " + to_string(ops[i].id));
    }
  }

  auto find = [&](const Timestamp& t) -> std::size_t {
    auto it = std::lower_bound(ops.begin(), ops.end(), t,
                               [](const Op& op, const Timestamp& key) { return op.id < key; });
    if (it == ops.end() || it->id != t) return ops.size();
    return static_cast<std::size_t>(it - ops.begin());
  };

  std::size_t root = ops.size();
  std::vector<std::vector<std::size_t>> children(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].val.is_root()) {
      if (root != ops.size()) throw error(errc::not_causally_closed, "more than one root");
      root = i;
      continue;
    }
    std::size_t parent = find(ops[i].ref);
    if (parent == ops.size()) {
      throw error(errc::not_causally_closed,
                  "ref " + to_string(ops[i].ref) + " of " + to_string(ops[i].id) + " missing");
    }
    children[parent].push_back(i);
  }
  if (ops.empty()) return {};
  if (root == ops.size()) throw error(errc::not_causally_closed, "no root");

  // Children were pushed in ascending id order; the stack pops the greatest first.
  std::vector<Timestamp> out;
  out.reserve(ops.size());
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    out.push_back(ops[n].id);
    for (std::size_t c : children[n]) stack.push_back(c);
  }
  if (out.size() != ops.size()) throw error(errc::not_causally_closed, "unreachable ops");
  return out;
}

/// Visible text: the weave minus the root, tombstones, and chars that have
/// any tombstone child in the set.
inline std::u32string text(std::span<const Op> input) {
  std::vector<Timestamp> order = weave(input);
  std::vector<Op> ops(input.begin(), input.end());
  std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) { return a.id < b.id; });
  std::vector<Timestamp> dead;
  for (const Op& op : ops) {
    if (op.val.is_tombstone()) dead.push_back(op.ref);
  }
  std::sort(dead.begin(), dead.end());
  std::u32string out;
  for (const Timestamp& t : order) {
    auto it = std::lower_bound(ops.begin(), ops.end(), t,
                               [](const Op& op, const Timestamp& key) { return op.id < key; });
    if (it->val.is_char() && !std::binary_search(dead.begin(), dead.end(), t)) {
      out.push_back(it->val.codepoint());
    }
  }
  return out;
}

}  // namespace chronofold::oracle
