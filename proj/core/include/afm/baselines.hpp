#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "afm/compression.hpp"
#include "afm/focus_manager.hpp"
#include "afm/model.hpp"
#include "afm/tokenizer.hpp"

namespace afm {

enum class Method { Default, Naive, Recency, Afm };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);  // throws InvalidArgument

// Common packing surface for AFM and the comparison strategies. Every
// implementation keeps stats.total_tokens <= budget_tokens.
class HistoryStrategy {
public:
    virtual ~HistoryStrategy() = default;

    virtual Method method() const = 0;
    virtual PackedPrompt pack(std::span<Message> history, std::string_view current_query,
                              std::size_t budget_tokens,
                              std::optional<std::string_view> system_preamble) const = 0;
};

// Sends only the system preamble; the history is never replayed.
class StatelessStrategy final : public HistoryStrategy {
public:
    explicit StatelessStrategy(TokenCounter counter = {});

    Method method() const override { return Method::Default; }
    PackedPrompt pack(std::span<Message> history, std::string_view current_query,
                      std::size_t budget_tokens,
                      std::optional<std::string_view> system_preamble) const override;

private:
    TokenCounter counter_;
};

// Longest verbatim suffix of the history that fits after the preamble.
class NaiveReplayStrategy final : public HistoryStrategy {
public:
    explicit NaiveReplayStrategy(TokenCounter counter = {});

    Method method() const override { return Method::Naive; }
    PackedPrompt pack(std::span<Message> history, std::string_view current_query,
                      std::size_t budget_tokens,
                      std::optional<std::string_view> system_preamble) const override;

private:
    TokenCounter counter_;
};

struct RecencyOptions {
    std::size_t keep_recent = 4;
    std::size_t local_budget = 20;
};

// Last keep_recent messages verbatim, older ones compressed to local_budget
// tokens each; a single oldest-first pass drops whatever overflows.
class RecencyCompressionStrategy final : public HistoryStrategy {
public:
    explicit RecencyCompressionStrategy(TokenCounter counter = {}, RecencyOptions options = {});

    Method method() const override { return Method::Recency; }
    PackedPrompt pack(std::span<Message> history, std::string_view current_query,
                      std::size_t budget_tokens,
                      std::optional<std::string_view> system_preamble) const override;

private:
    TokenCounter counter_;
    RecencyOptions options_;
    HeuristicCompressor compressor_;
};

class AfmStrategy final : public HistoryStrategy {
public:
    explicit AfmStrategy(FocusPacker packer);

    Method method() const override { return Method::Afm; }
    PackedPrompt pack(std::span<Message> history, std::string_view current_query,
                      std::size_t budget_tokens,
                      std::optional<std::string_view> system_preamble) const override;

    const FocusPacker& packer() const { return packer_; }

private:
    FocusPacker packer_;
};

}  // namespace afm
