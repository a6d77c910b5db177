#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hsd {

// Decodes the codepoint starting at byte offset i. Writes its byte length to
// len. Malformed sequences decode as the single raw byte (pass-through), so
// cleaning is total on arbitrary input.
char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len);

void append_utf8(std::string& out, char32_t cp);

}  // namespace hsd
