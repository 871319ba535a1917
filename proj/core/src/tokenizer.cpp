#include "afm/tokenizer.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "afm/error.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace afm {

namespace {

std::string decode_base64(std::string_view text) {
    static constexpr std::string_view kAlphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::array<int, 256> lookup{};
    lookup.fill(-1);
    for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
        lookup[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
    }
    std::string out;
    unsigned buffer = 0;
    int bits = 0;
    for (const char c : text) {
        if (c == '=') break;
        const int value = lookup[static_cast<unsigned char>(c)];
        if (value < 0) throw AssetLoadError("invalid base64 token: " + std::string(text));
        buffer = (buffer << 6) | static_cast<unsigned>(value);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
        }
    }
    return out;
}

bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool letter_like(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

// GPT-2 style pre-tokenization, simplified: an optional leading space glued
// to a run of letters, up to three digits, or punctuation; whitespace runs
// otherwise.
std::vector<std::string_view> pretokenize(std::string_view text) {
    std::vector<std::string_view> pieces;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const std::size_t start = i;
        if (text[i] == ' ' && i + 1 < n && !ascii_space(text[i + 1])) ++i;
        const char c = text[i];
        if (ascii_space(c)) {
            while (i < n && ascii_space(text[i])) ++i;
            // Leave a final ' ' to prefix the following word.
            if (i < n && i - start > 1 && text[i - 1] == ' ') --i;
        } else if (letter_like(c)) {
            while (i < n && letter_like(text[i])) ++i;
        } else if (ascii_digit(c)) {
            std::size_t digits = 0;
            while (i < n && ascii_digit(text[i]) && digits < 3) {
                ++i;
                ++digits;
            }
        } else {
            while (i < n && !ascii_space(text[i]) && !letter_like(text[i]) && !ascii_digit(text[i])) ++i;
        }
        pieces.push_back(text.substr(start, i - start));
    }
    return pieces;
}

}  // namespace

struct TokenCounter::Vocabulary {
    std::unordered_map<std::string, std::size_t> ranks;

    std::size_t rank_of(const std::string& token) const {
        const auto it = ranks.find(token);
        return it == ranks.end() ? std::numeric_limits<std::size_t>::max() : it->second;
    }

    std::size_t encode_length(std::string_view piece) const {
        if (ranks.contains(std::string(piece))) return 1;
        std::vector<std::string> parts;
        parts.reserve(piece.size());
        for (const char c : piece) parts.emplace_back(1, c);
        while (parts.size() > 1) {
            std::size_t best = std::numeric_limits<std::size_t>::max();
            std::size_t best_index = 0;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
                const std::size_t r = rank_of(parts[i] + parts[i + 1]);
                if (r < best) {
                    best = r;
                    best_index = i;
                }
            }
            if (best == std::numeric_limits<std::size_t>::max()) break;
            parts[best_index] += parts[best_index + 1];
            parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best_index) + 1);
        }
        return parts.size();
    }
};

std::size_t count_whitespace_tokens(std::string_view text) {
    std::size_t count = 0;
    bool in_token = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const bool space = detail::is_unicode_space(detail::decode_utf8(text, pos));
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

TokenCounter TokenCounter::whitespace(std::size_t per_message_overhead) {
    TokenCounter counter;
    counter.overhead_ = per_message_overhead;
    return counter;
}

TokenCounter TokenCounter::from_vocab_text(std::string_view text, std::size_t per_message_overhead) {
    auto vocab = std::make_shared<Vocabulary>();
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim_ascii(line);
        if (trimmed.empty()) continue;
        const auto space = trimmed.find(' ');
        if (space == std::string_view::npos) {
            throw AssetLoadError("vocabulary line " + std::to_string(line_no) + ": expected '<token> <rank>'");
        }
        std::size_t rank = 0;
        try {
            rank = std::stoull(std::string(trimmed.substr(space + 1)));
        } catch (const std::exception&) {
            throw AssetLoadError("vocabulary line " + std::to_string(line_no) + ": bad rank");
        }
        vocab->ranks.emplace(decode_base64(trimmed.substr(0, space)), rank);
    }
    if (vocab->ranks.empty()) throw AssetLoadError("vocabulary is empty");
    TokenCounter counter;
    counter.vocab_ = std::move(vocab);
    counter.overhead_ = per_message_overhead;
    return counter;
}

TokenCounter TokenCounter::from_vocab_file(const std::filesystem::path& path,
                                           std::size_t per_message_overhead) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw AssetLoadError("cannot open vocabulary: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_vocab_text(buffer.str(), per_message_overhead);
}

std::size_t TokenCounter::count(std::string_view text) const {
    if (!vocab_) return count_whitespace_tokens(text);
    std::size_t total = 0;
    for (const auto piece : pretokenize(text)) total += vocab_->encode_length(piece);
    return total;
}

std::size_t TokenCounter::count_messages(std::span<const ChatMessage> messages) const {
    std::size_t total = 0;
    for (const auto& message : messages) total += count(message.content) + overhead_;
    return total;
}

}  // namespace afm
