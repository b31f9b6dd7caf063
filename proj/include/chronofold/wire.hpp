#pragma once

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chronofold/error.hpp"
#include "chronofold/op.hpp"

namespace chronofold {

/// Contiguous run of a sender's log, starting at sender index start_index.
struct OpBatch {
  Author sender;
  LogIndex start_index = 1;
  std::vector<Op> ops;

  friend bool operator==(const OpBatch&, const OpBatch&) = default;
};

namespace wire {

inline constexpr std::string_view kBatchMagic = "CFOP1";

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= line.size()) {
    std::size_t sp = line.find(' ', i);
    if (sp == std::string_view::npos) sp = line.size();
    out.push_back(line.substr(i, sp - i));
    i = sp + 1;
  }
  return out;
}

inline LogIndex parse_index(std::string_view field, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
      (field.size() > 1 && field[0] == '0') || v >= kInfinity) {
    throw error(errc::malformed_line, "bad " + std::string(what) + " '" + std::string(field) + "'");
  }
  return static_cast<LogIndex>(v);
}

inline Author parse_author(std::string_view field) {
  if (!Author::valid(field)) throw error(errc::bad_author, "'" + std::string(field) + "'");
  return Author(field);
}

inline std::string encode_value(const OpValue& v) {
  switch (v.kind()) {
    case OpValue::Kind::root: return "R";
    case OpValue::Kind::tombstone: return "T";
    case OpValue::Kind::character: break;
  }
  char buf[8];
  auto cp = static_cast<std::uint32_t>(v.codepoint());
  std::snprintf(buf, sizeof buf, "C%04X", cp);
  return buf;
}

inline OpValue decode_value(std::string_view field) {
  if (field == "R") return OpValue::root();
  if (field == "T") return OpValue::tombstone();
  if (field.size() < 5 || field.size() > 7 || field[0] != 'C') {
    throw error(errc::bad_value, "'" + std::string(field) + "'");
  }
  std::string_view hex = field.substr(1);
  for (char c : hex) {
    if (!((c >= '0' && c <= '9') || (c >= 'A' && c <= 'F'))) {
      throw error(errc::bad_value, "'" + std::string(field) + "'");
    }
  }
  std::uint32_t cp = 0;
  std::from_chars(hex.data(), hex.data() + hex.size(), cp, 16);
  // Canonical form only: no padding beyond four digits.
  if (hex.size() > 4 && hex[0] == '0') {
    throw error(errc::bad_value, "non-canonical '" + std::string(field) + "'");
  }
  return OpValue::character(static_cast<char32_t>(cp));
}

}  // namespace wire

/// `<andx> <author> <ref_andx> <ref_author> <val>`, val one of R, T, C+hex.
inline std::string encode_op(const Op& op) {
  return std::to_string(op.id.andx) + ' ' + op.id.author.str() + ' ' +
         std::to_string(op.ref.andx) + ' ' + op.ref.author.str() + ' ' +
         wire::encode_value(op.val);
}

inline Op decode_op(std::string_view line) {
  auto f = wire::split_fields(line);
  if (f.size() != 5) {
    throw error(errc::malformed_line, "expected 5 fields in '" + std::string(line) + "'");
  }
  Op op;
  op.id.andx = wire::parse_index(f[0], "andx");
  op.id.author = wire::parse_author(f[1]);
  op.ref.andx = wire::parse_index(f[2], "ref andx");
  op.ref.author = wire::parse_author(f[3]);
  op.val = wire::decode_value(f[4]);
  return op;
}

/// Header line plus one op per line, each newline-terminated.
inline std::string encode_batch(const OpBatch& batch) {
  std::string out = std::string(wire::kBatchMagic) + ' ' + batch.sender.str() + ' ' +
                    std::to_string(batch.start_index) + ' ' + std::to_string(batch.ops.size()) +
                    '\n';
  for (const Op& op : batch.ops) {
    out += encode_op(op);
    out += '\n';
  }
  return out;
}

inline OpBatch decode_batch(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t nl = text.find('\n', i);
    if (nl == std::string_view::npos) {
      throw error(errc::malformed_line, "batch must end with a newline");
    }
    lines.push_back(text.substr(i, nl - i));
    i = nl + 1;
  }
  if (lines.empty()) throw error(errc::malformed_line, "empty batch");
  auto h = wire::split_fields(lines[0]);
  if (h.size() != 4 || h[0] != wire::kBatchMagic) {
    throw error(errc::malformed_line, "bad batch header '" + std::string(lines[0]) + "'");
  }
  OpBatch batch;
  batch.sender = wire::parse_author(h[1]);
  batch.start_index = wire::parse_index(h[2], "start index");
  LogIndex count = wire::parse_index(h[3], "count");
  if (batch.start_index == 0) throw error(errc::malformed_line, "start index is 1-based");
  if (lines.size() != static_cast<std::size_t>(count) + 1) {
    throw error(errc::malformed_line, "header announces " + std::to_string(count) + " ops, found " +
                                          std::to_string(lines.size() - 1));
  }
  batch.ops.reserve(count);
  for (std::size_t k = 1; k < lines.size(); ++k) batch.ops.push_back(decode_op(lines[k]));
  return batch;
}

}  // namespace chronofold
