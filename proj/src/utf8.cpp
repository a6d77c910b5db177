#include "hsd/utf8.hpp"

namespace hsd {

char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len) {
    const auto byte = [&](std::size_t k) -> std::uint8_t {
        return static_cast<std::uint8_t>(s[k]);
    };
    const std::uint8_t b0 = byte(i);
    len = 1;
    if (b0 < 0x80) return b0;

    int need = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3;
        cp = b0 & 0x07;
    } else {
        return b0;  // stray continuation or invalid lead byte
    }
    if (i + static_cast<std::size_t>(need) >= s.size()) {
        return b0;  // truncated sequence
    }
    for (int k = 1; k <= need; ++k) {
        const std::uint8_t bk = byte(i + static_cast<std::size_t>(k));
        if ((bk & 0xC0) != 0x80) return b0;
        cp = (cp << 6) | (bk & 0x3F);
    }
    len = static_cast<std::size_t>(need) + 1;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace hsd
