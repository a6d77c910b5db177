#include "hsd/text.hpp"

#include <array>

#include "hsd/utf8.hpp"

namespace hsd {

bool is_separable_punct(char32_t cp) {
    if (cp == U'#' || cp == U'@') return false;
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

namespace {

std::u32string decode_all(std::string_view raw) {
    std::u32string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t len = 0;
        out.push_back(decode_utf8(raw, i, len));
        i += len;
    }
    return out;
}

bool starts_with(const std::u32string& s, std::size_t i, std::u32string_view pat) {
    if (i + pat.size() > s.size()) return false;
    for (std::size_t k = 0; k < pat.size(); ++k) {
        if (s[i + k] != pat[k]) return false;
    }
    return true;
}

bool url_starts_at(const std::u32string& s, std::size_t i) {
    return starts_with(s, i, U"https://") || starts_with(s, i, U"http://") ||
           starts_with(s, i, U"t.co/");
}

}  // namespace

std::string clean_text(std::string_view raw) {
    std::u32string s = decode_all(raw);

    // URLs: from the match start up to the next whitespace.
    std::u32string no_url;
    no_url.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (url_starts_at(s, i)) {
            while (i < s.size() && !is_space_cp(s[i])) ++i;
            continue;
        }
        no_url.push_back(s[i]);
        ++i;
    }

    // Pictographic and format codepoints.
    std::u32string kept;
    kept.reserve(no_url.size());
    for (const char32_t cp : no_url) {
        if (!is_removed_cp(cp)) kept.push_back(cp);
    }

    // Runs of one repeated punctuation mark collapse to a single mark.
    std::u32string collapsed;
    collapsed.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0 && kept[i] == kept[i - 1] && is_separable_punct(kept[i])) continue;
        collapsed.push_back(kept[i]);
    }

    // One space before every remaining punctuation mark, then whitespace
    // runs collapse to a single space and the ends are trimmed.
    std::string out;
    out.reserve(collapsed.size() * 2);
    bool pending_space = false;
    for (const char32_t cp : collapsed) {
        if (is_space_cp(cp)) {
            pending_space = true;
            continue;
        }
        if ((pending_space || is_separable_punct(cp)) && !out.empty()) out.push_back(' ');
        pending_space = false;
        append_utf8(out, cp);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view cleaned) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        std::size_t j = i;
        while (j < cleaned.size() && cleaned[j] != ' ') ++j;
        if (j > i) tokens.emplace_back(cleaned.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace hsd
