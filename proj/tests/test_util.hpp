#pragma once

#include <string>
#include <string_view>

#include "chronofold/utf8.hpp"

inline std::string u8(std::u32string_view s) { return chronofold::utf8::encode(s); }
