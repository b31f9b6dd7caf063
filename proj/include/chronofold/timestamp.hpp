#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "chronofold/error.hpp"

namespace chronofold {

/// 1-based position in a replica's subjective log.
using LogIndex = std::uint32_t;

/// Terminator of the weave linked list. Log indices start at 1.
inline constexpr LogIndex kEnd = 0;

/// "Not in this log". Never a valid index.
inline constexpr LogIndex kInfinity = std::numeric_limits<LogIndex>::max();

/// Process identifier: 1 to 16 bytes of printable ASCII, stored inline.
/// Ordering is bytewise, which is the tie-break of the arbitrary total order.
class Author {
 public:
  static constexpr std::size_t kMaxSize = 16;

  Author() = default;

  explicit Author(std::string_view id) {
    if (!valid(id)) {
      throw error(errc::bad_author, "author id must be 1-16 printable ASCII bytes, got '" +
                                        std::string(id) + "'");
    }
    std::copy(id.begin(), id.end(), bytes_.begin());
    size_ = static_cast<std::uint8_t>(id.size());
  }

  static bool valid(std::string_view id) noexcept {
    if (id.empty() || id.size() > kMaxSize) return false;
    return std::all_of(id.begin(), id.end(), [](char c) { return c > 0x20 && c < 0x7f; });
  }

  std::string_view view() const noexcept { return {bytes_.data(), size_}; }
  std::string str() const { return std::string(view()); }
  bool empty() const noexcept { return size_ == 0; }

  friend bool operator==(const Author& a, const Author& b) noexcept {
    return a.view() == b.view();
  }
  friend std::strong_ordering operator<=>(const Author& a, const Author& b) noexcept {
    return a.view().compare(b.view()) <=> 0;
  }

 private:
  std::array<char, kMaxSize> bytes_{};
  std::uint8_t size_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Author& a) { return os << a.view(); }

/// Log timestamp <andx, author>: andx is the op's 1-based index in its
/// author's own log.
struct Timestamp {
  LogIndex andx = 0;
  Author author;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
  friend std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
    if (auto c = a.andx <=> b.andx; c != 0) return c;
    return a.author <=> b.author;
  }
};

/// Arbitrary total order: lexicographic on (andx, author bytes).
inline std::strong_ordering ato_compare(const Timestamp& a, const Timestamp& b) noexcept {
  return a <=> b;
}

inline std::ostream& operator<<(std::ostream& os, const Timestamp& t) {
  return os << '<' << t.andx << ',' << t.author << '>';
}

inline std::string to_string(const Timestamp& t) {
  return "<" + std::to_string(t.andx) + "," + t.author.str() + ">";
}

}  // namespace chronofold

template <>
struct std::hash<chronofold::Author> {
  std::size_t operator()(const chronofold::Author& a) const noexcept {
    return std::hash<std::string_view>{}(a.view());
  }
};

template <>
struct std::hash<chronofold::Timestamp> {
  std::size_t operator()(const chronofold::Timestamp& t) const noexcept {
    return std::hash<chronofold::Author>{}(t.author) * 1000003u ^ t.andx;
  }
};
