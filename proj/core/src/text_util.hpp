#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

namespace afm::detail {

inline std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string to_upper_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

inline std::string_view trim_ascii(std::string_view text) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return text;
}

inline void replace_all(std::string& text, std::string_view from, std::string_view to) {
    if (from.empty()) return;
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

// Position of the earliest whole-word, case-insensitive match of `word`
// (uppercase ASCII) in `text`, or npos.
inline std::size_t find_word_ci(std::string_view text, std::string_view word) {
    const std::string upper = to_upper_ascii(text);
    const auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    std::size_t pos = 0;
    while ((pos = upper.find(word, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_word(upper[pos - 1]);
        const std::size_t end = pos + word.size();
        const bool right_ok = end >= upper.size() || !is_word(upper[end]);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string_view::npos;
}

}  // namespace afm::detail
