#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>

#include "afm/model.hpp"

namespace afm {

enum class TokenizerMode { Bpe, Whitespace };

// Number of maximal runs of non-whitespace code points, using the Unicode
// White_Space property over UTF-8 input. Malformed bytes count as
// non-whitespace.
std::size_t count_whitespace_tokens(std::string_view text);

// Token estimator shared by packing, compression and the baselines.
// Immutable after construction and cheap to copy.
class TokenCounter {
public:
    TokenCounter() = default;

    static TokenCounter whitespace(std::size_t per_message_overhead = 0);

    // Byte-level BPE vocabulary in the tiktoken text format
    // ("<base64 token> <rank>" per line). Throws AssetLoadError.
    static TokenCounter from_vocab_file(const std::filesystem::path& path,
                                        std::size_t per_message_overhead = 0);
    static TokenCounter from_vocab_text(std::string_view text,
                                        std::size_t per_message_overhead = 0);

    TokenizerMode mode() const { return vocab_ ? TokenizerMode::Bpe : TokenizerMode::Whitespace; }
    std::size_t per_message_overhead() const { return overhead_; }

    std::size_t count(std::string_view text) const;

    // Sum of content counts plus the per-message overhead for each message.
    std::size_t count_messages(std::span<const ChatMessage> messages) const;

    struct Vocabulary;

private:
    std::shared_ptr<const Vocabulary> vocab_;
    std::size_t overhead_ = 0;
};

}  // namespace afm
