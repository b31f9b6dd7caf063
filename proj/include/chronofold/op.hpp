#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "chronofold/error.hpp"
#include "chronofold/timestamp.hpp"

namespace chronofold {

inline constexpr bool is_scalar_value(char32_t cp) noexcept {
  return cp <= 0x10FFFF && (cp < 0xD800 || cp > 0xDFFF);
}

/// Value carried by an op: the document root, a character, or a tombstone.
class OpValue {
 public:
  enum class Kind : std::uint8_t { root, character, tombstone };

  constexpr OpValue() = default;

  static constexpr OpValue root() noexcept { return OpValue(Kind::root, 0); }
  static constexpr OpValue tombstone() noexcept { return OpValue(Kind::tombstone, 0); }
  static OpValue character(char32_t cp) {
    if (!is_scalar_value(cp)) {
      throw error(errc::bad_value, "not a Unicode scalar value: " + std::to_string(cp));
    }
    return OpValue(Kind::character, cp);
  }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_root() const noexcept { return kind_ == Kind::root; }
  constexpr bool is_char() const noexcept { return kind_ == Kind::character; }
  constexpr bool is_tombstone() const noexcept { return kind_ == Kind::tombstone; }
  /// Only meaningful for characters.
  constexpr char32_t codepoint() const noexcept { return cp_; }

  friend constexpr bool operator==(const OpValue&, const OpValue&) = default;

 private:
  constexpr OpValue(Kind k, char32_t cp) : kind_(k), cp_(cp) {}

  Kind kind_ = Kind::root;
  char32_t cp_ = 0;
};

/// <id, ref(id), val(id)>. The unit of replication.
struct Op {
  Timestamp id;
  Timestamp ref;
  OpValue val;

  friend bool operator==(const Op&, const Op&) = default;

  static Op make_root(const Author& creator) {
    Timestamp t{1, creator};
    return Op{t, t, OpValue::root()};
  }
};

/// Shape checks that need no log: root iff self-reference, and the
/// andx of a non-root op exceeds that of its parent.
inline void validate_shape(const Op& op) {
  if (op.id.andx == 0 || op.ref.andx == 0) {
    throw error(errc::invalid_op, "andx is 1-based");
  }
  if (op.val.is_root() != (op.id == op.ref)) {
    throw error(errc::invalid_op, "root ops and only root ops reference themselves: " + to_string(op.id));
  }
  if (op.val.is_root() && op.id.andx != 1) {
    throw error(errc::invalid_op, "root op must have andx 1");
  }
  if (!op.val.is_root() && op.id.andx <= op.ref.andx) {
    throw error(errc::invalid_op, "andx(id) must exceed andx(ref) for " + to_string(op.id));
  }
}

inline std::ostream& operator<<(std::ostream& os, const OpValue& v) {
  switch (v.kind()) {
    case OpValue::Kind::root: return os << "ROOT";
    case OpValue::Kind::tombstone: return os << "TOMB";
    case OpValue::Kind::character: return os << "U+" << std::hex << std::uppercase
                                              << static_cast<std::uint32_t>(v.codepoint())
                                              << std::dec << std::nouppercase;
  }
  return os;
}

inline std::ostream& operator<<(std::ostream& os, const Op& op) {
  return os << '<' << op.id << ',' << op.ref << ',' << op.val << '>';
}

}  // namespace chronofold
