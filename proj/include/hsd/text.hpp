#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hsd {

struct RawPost {
    std::string id;
    std::string text;
    std::string label;
    std::string task;
};

struct CleanPost {
    std::string id;
    std::vector<std::string> tokens;
    int label_id = 0;
    std::string task;
};

// Character classes used by the cleaner. Frozen choices:
//  - separable punctuation = ASCII punctuation minus '#' and '@' (sigils stay
//    attached to the following word),
//  - whitespace = ASCII whitespace plus the common Unicode space/line
//    separator codepoints,
//  - removed codepoints = the pictographic/emoji blocks plus zero-width and
//    format characters (table in unicode_blocks.cpp).
bool is_separable_punct(char32_t cp);
bool is_space_cp(char32_t cp);
bool is_removed_cp(char32_t cp);

// Normalizes raw social-media text. In order: drop URLs (http://, https://,
// or bare t.co/ runs, up to the next whitespace), drop pictographic and
// format codepoints, collapse runs of one repeated punctuation mark, insert
// one space before each remaining punctuation mark, collapse whitespace runs
// to a single space, trim. No stemming, no stopword removal, case preserved.
// Total and idempotent.
std::string clean_text(std::string_view raw);

// Splits cleaned text on spaces. Never yields an empty token.
std::vector<std::string> tokenize(std::string_view cleaned);

}  // namespace hsd
