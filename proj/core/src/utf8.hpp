#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace afm::detail {

// Decodes one UTF-8 sequence at text[pos] and advances pos. Malformed input
// consumes a single byte and yields U+FFFD.
inline char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    const unsigned char lead = byte(pos);
    std::size_t length = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    if ((lead & 0xE0) == 0xC0) {
        length = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return 0xFFFD;
    }
    if (pos + length > text.size()) {
        ++pos;
        return 0xFFFD;
    }
    for (std::size_t i = 1; i < length; ++i) {
        const unsigned char cont = byte(pos + i);
        if ((cont & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    pos += length;
    return cp;
}

// Unicode White_Space property.
inline bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
        case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// [begin, end) byte ranges of maximal non-whitespace runs.
inline std::vector<std::pair<std::size_t, std::size_t>> whitespace_token_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t pos = 0;
    bool in_token = false;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const bool space = is_unicode_space(decode_utf8(text, pos));
        if (!space && !in_token) spans.emplace_back(start, pos);
        if (!space) spans.back().second = pos;
        in_token = !space;
    }
    return spans;
}

}  // namespace afm::detail
