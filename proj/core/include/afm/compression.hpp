#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "afm/model.hpp"
#include "afm/tokenizer.hpp"

namespace afm {

class Gateway;

class Compressor {
public:
    virtual ~Compressor() = default;

    virtual std::string compress(std::string_view text, std::size_t target_tokens,
                                 std::string_view query_hint) const = 0;
};

// Splits on runs of '.', '!' or '?' (kept with the sentence) and on newlines.
// Sentences are trimmed; empty ones are discarded.
std::vector<std::string> split_sentences(std::string_view text);

struct SentenceWeights {
    double length_penalty = 0.05;        // per token beyond length_allowance
    std::size_t length_allowance = 25;
    double position_bonus = 0.5;         // for the first leading_sentences
    std::size_t leading_sentences = 2;
};

// Extractive compressor: ranks sentences by hint overlap, length and
// position, keeps the best ones in original order and cuts at a whole-token
// boundary so the result never exceeds the target.
class HeuristicCompressor final : public Compressor {
public:
    explicit HeuristicCompressor(TokenCounter counter = {}, SentenceWeights weights = {});

    std::string compress(std::string_view text, std::size_t target_tokens,
                         std::string_view query_hint) const override;

    const SentenceWeights& weights() const { return weights_; }

private:
    TokenCounter counter_;
    SentenceWeights weights_;
};

// Abstractive compression by a chat model. The reply is returned verbatim,
// without re-checking its length.
class RemoteCompressor final : public Compressor {
public:
    RemoteCompressor(std::shared_ptr<Gateway> gateway, std::string model,
                     std::string prompt_template = {});

    std::string compress(std::string_view text, std::size_t target_tokens,
                         std::string_view query_hint) const override;

    std::string prompt_for(std::string_view text, std::size_t target_tokens) const;

private:
    std::shared_ptr<Gateway> gateway_;
    std::string model_;
    std::string prompt_template_;
};

// Cached summary. One slot per message: a later call with a different target
// or hint reuses the first summary.
const std::string& summary_of(Message& message, const Compressor& compressor,
                              std::size_t target_tokens, std::string_view query_hint);

}  // namespace afm
