#include "afm/compression.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "afm/assets.hpp"
#include "afm/embeddings.hpp"
#include "afm/error.hpp"
#include "afm/gateway.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace afm {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Longest whole-token prefix of `text` whose count is within `target`.
std::string truncate_to_tokens(std::string_view text, std::size_t target, const TokenCounter& counter) {
    if (counter.count(text) <= target) return std::string(text);
    const auto spans = detail::whitespace_token_spans(text);
    std::size_t keep = std::min(target, spans.size());
    while (keep > 0 && counter.count(text.substr(0, spans[keep - 1].second)) > target) --keep;
    if (keep == 0) return {};
    return std::string(text.substr(0, spans[keep - 1].second));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    const auto flush = [&] {
        const std::string_view trimmed = detail::trim_ascii(current);
        if (!trimmed.empty()) sentences.emplace_back(trimmed);
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            flush();
        } else if (is_terminator(c)) {
            current.push_back(c);
            while (i + 1 < text.size() && is_terminator(text[i + 1])) current.push_back(text[++i]);
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return sentences;
}

HeuristicCompressor::HeuristicCompressor(TokenCounter counter, SentenceWeights weights)
    : counter_(std::move(counter)), weights_(weights) {}

std::string HeuristicCompressor::compress(std::string_view text, std::size_t target_tokens,
                                          std::string_view query_hint) const {
    if (target_tokens == 0) throw InvalidArgument("target_tokens must be at least 1");
    const std::vector<std::string> sentences = split_sentences(text);
    if (sentences.empty()) return {};

    const auto hint_tokens = lexical_tokens(query_hint);
    const std::set<std::string> hint(hint_tokens.begin(), hint_tokens.end());

    std::vector<double> scores(sentences.size());
    std::vector<std::size_t> lengths(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto tokens = lexical_tokens(sentences[i]);
        const std::set<std::string> distinct(tokens.begin(), tokens.end());
        std::size_t overlap = 0;
        for (const auto& token : distinct) overlap += hint.contains(token) ? 1 : 0;
        lengths[i] = counter_.count(sentences[i]);
        const std::size_t excess = lengths[i] > weights_.length_allowance ? lengths[i] - weights_.length_allowance : 0;
        scores[i] = static_cast<double>(overlap) - weights_.length_penalty * static_cast<double>(excess) +
                    (i < weights_.leading_sentences ? weights_.position_bonus : 0.0);
    }

    std::vector<std::size_t> order(sentences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<std::size_t> selected;
    std::size_t used = 0;
    for (const std::size_t i : order) {
        if (used + lengths[i] <= target_tokens) {
            selected.push_back(i);
            used += lengths[i];
        }
    }
    if (selected.empty()) selected.push_back(order.front());
    std::sort(selected.begin(), selected.end());

    std::string joined;
    for (const std::size_t i : selected) {
        if (!joined.empty()) joined.push_back(' ');
        joined += sentences[i];
    }
    return truncate_to_tokens(joined, target_tokens, counter_);
}

RemoteCompressor::RemoteCompressor(std::shared_ptr<Gateway> gateway, std::string model,
                                   std::string prompt_template)
    : gateway_(std::move(gateway)), model_(std::move(model)), prompt_template_(std::move(prompt_template)) {
    if (!gateway_) throw InvalidArgument("RemoteCompressor needs a gateway");
    if (prompt_template_.empty()) {
        const auto bundled = bundled_asset("prompts/compress_v1.txt");
        if (!bundled) throw AssetLoadError("bundled compression prompt is missing");
        prompt_template_ = std::string(*bundled);
    }
}

std::string RemoteCompressor::prompt_for(std::string_view text, std::size_t target_tokens) const {
    std::string prompt = prompt_template_;
    detail::replace_all(prompt, "{target_tokens}", std::to_string(target_tokens));
    detail::replace_all(prompt, "{text}", text);
    return prompt;
}

std::string RemoteCompressor::compress(std::string_view text, std::size_t target_tokens,
                                       std::string_view /*query_hint*/) const {
    if (target_tokens == 0) throw InvalidArgument("target_tokens must be at least 1");
    if (detail::trim_ascii(text).empty()) return {};
    const std::array<ChatMessage, 1> request{ChatMessage{Role::User, prompt_for(text, target_tokens)}};
    ChatOptions options;
    options.model = model_;
    options.temperature = 0.0;
    return gateway_->chat(request, options).text;
}

const std::string& summary_of(Message& message, const Compressor& compressor,
                              std::size_t target_tokens, std::string_view query_hint) {
    if (!message.summary) message.summary = compressor.compress(message.text, target_tokens, query_hint);
    return *message.summary;
}

}  // namespace afm
