#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chronofold {

/// Failure categories raised by the library, available as `error::code()`.
enum class errc {
  duplicate_id,
  ref_not_in_log,
  bad_self_index,
  out_of_range,
  invalid_anchor,
  invalid_target,
  invalid_op,
  not_causally_closed,
  unknown_timestamp,
  malformed_line,
  bad_value,
  bad_author,
  out_of_order_index,
  bad_author_index,
  unknown_ref,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::duplicate_id: return "DuplicateId";
    case errc::ref_not_in_log: return "RefNotInLog";
    case errc::bad_self_index: return "BadSelfIndex";
    case errc::out_of_range: return "OutOfRange";
    case errc::invalid_anchor: return "InvalidAnchor";
    case errc::invalid_target: return "InvalidTarget";
    case errc::invalid_op: return "InvalidOp";
    case errc::not_causally_closed: return "NotCausallyClosed";
    case errc::unknown_timestamp: return "UnknownTimestamp";
    case errc::malformed_line: return "MalformedLine";
    case errc::bad_value: return "BadValue";
    case errc::bad_author: return "BadAuthor";
    case errc::out_of_order_index: return "OutOfOrderIndex";
    case errc::bad_author_index: return "BadAuthorIndex";
    case errc::unknown_ref: return "UnknownRef";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

inline std::ostream& operator<<(std::ostream& os, errc code) { return os << to_string(code); }

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace chronofold
