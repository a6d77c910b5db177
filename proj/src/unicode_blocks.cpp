#include "hsd/text.hpp"

namespace hsd {

namespace {

struct CpRange {
    char32_t lo;
    char32_t hi;
};

// Frozen removal table: pictographic/emoji blocks and invisible format
// characters. Whole Unicode blocks, inclusive ranges.
constexpr CpRange kRemovedRanges[] = {
    {0x200B, 0x200F},    // zero-width chars, BiDi marks (incl. ZWJ)
    {0x2060, 0x2060},    // word joiner
    {0x20D0, 0x20FF},    // combining marks for symbols (keycap etc.)
    {0x2300, 0x23FF},    // Miscellaneous Technical (watch, hourglass, AV controls)
    {0x25A0, 0x25FF},    // Geometric Shapes
    {0x2600, 0x26FF},    // Miscellaneous Symbols
    {0x2700, 0x27BF},    // Dingbats
    {0x2B00, 0x2BFF},    // Miscellaneous Symbols and Arrows
    {0xFE00, 0xFE0F},    // variation selectors
    {0xFEFF, 0xFEFF},    // BOM / zero-width no-break space
    {0x1F000, 0x1F02F},  // Mahjong Tiles
    {0x1F0A0, 0x1F0FF},  // Playing Cards
    {0x1F100, 0x1F1FF},  // Enclosed Alphanumeric Supplement (regional indicators)
    {0x1F200, 0x1F2FF},  // Enclosed Ideographic Supplement
    {0x1F300, 0x1F5FF},  // Miscellaneous Symbols and Pictographs
    {0x1F600, 0x1F64F},  // Emoticons
    {0x1F650, 0x1F67F},  // Ornamental Dingbats
    {0x1F680, 0x1F6FF},  // Transport and Map Symbols
    {0x1F700, 0x1F77F},  // Alchemical Symbols
    {0x1F780, 0x1F7FF},  // Geometric Shapes Extended
    {0x1F800, 0x1F8FF},  // Supplemental Arrows-C
    {0x1F900, 0x1F9FF},  // Supplemental Symbols and Pictographs
    {0x1FA00, 0x1FA6F},  // Chess Symbols
    {0x1FA70, 0x1FAFF},  // Symbols and Pictographs Extended-A
    {0x1FB00, 0x1FBFF},  // Symbols for Legacy Computing
    {0xE0000, 0xE007F},  // Tags (emoji tag sequences)
};

}  // namespace

bool is_removed_cp(char32_t cp) {
    for (const auto& r : kRemovedRanges) {
        if (cp >= r.lo && cp <= r.hi) return true;
    }
    return false;
}

}  // namespace hsd
