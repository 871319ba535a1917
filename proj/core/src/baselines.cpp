#include "afm/baselines.hpp"

#include "afm/error.hpp"
#include "text_util.hpp"

namespace afm {

namespace {

// Adds the preamble if it fits and returns the budget left for history.
std::size_t admit_preamble(PackedPrompt& prompt, const TokenCounter& counter, std::size_t budget,
                           std::optional<std::string_view> preamble) {
    if (!preamble) return budget;
    const std::size_t tokens = counter.count(*preamble);
    if (tokens > budget) return budget;
    prompt.entries.push_back({Role::System, std::string(*preamble), Fidelity::Full, std::nullopt, tokens});
    prompt.stats.total_tokens += tokens;
    return budget - tokens;
}

void append_entry(PackedPrompt& prompt, const Message& message, std::string content,
                  Fidelity fidelity, std::size_t tokens) {
    prompt.entries.push_back({message.role, std::move(content), fidelity, message.id, tokens});
    prompt.stats.total_tokens += tokens;
    switch (fidelity) {
        case Fidelity::Full: ++prompt.stats.full_count; break;
        case Fidelity::Compressed: ++prompt.stats.compressed_count; break;
        case Fidelity::Placeholder: ++prompt.stats.stub_count; break;
    }
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Default: return "default";
        case Method::Naive: return "naive";
        case Method::Recency: return "recency";
        case Method::Afm: return "afm";
    }
    return "afm";
}

Method parse_method(std::string_view name) {
    const std::string lower = detail::to_lower_ascii(name);
    if (lower == "default" || lower == "stateless") return Method::Default;
    if (lower == "naive") return Method::Naive;
    if (lower == "recency") return Method::Recency;
    if (lower == "afm") return Method::Afm;
    throw InvalidArgument("unknown method: " + std::string(name));
}

StatelessStrategy::StatelessStrategy(TokenCounter counter) : counter_(std::move(counter)) {}

PackedPrompt StatelessStrategy::pack(std::span<Message> history, std::string_view,
                                     std::size_t budget_tokens,
                                     std::optional<std::string_view> system_preamble) const {
    PackedPrompt prompt;
    admit_preamble(prompt, counter_, budget_tokens, system_preamble);
    prompt.stats.dropped_count = history.size();
    return prompt;
}

NaiveReplayStrategy::NaiveReplayStrategy(TokenCounter counter) : counter_(std::move(counter)) {}

PackedPrompt NaiveReplayStrategy::pack(std::span<Message> history, std::string_view,
                                       std::size_t budget_tokens,
                                       std::optional<std::string_view> system_preamble) const {
    PackedPrompt prompt;
    std::size_t left = admit_preamble(prompt, counter_, budget_tokens, system_preamble);

    std::vector<std::size_t> costs(history.size());
    std::size_t first = history.size();
    while (first > 0) {
        const std::size_t cost = counter_.count(history[first - 1].text);
        if (cost > left) break;
        left -= cost;
        costs[--first] = cost;
    }
    prompt.stats.dropped_count = first;
    for (std::size_t i = first; i < history.size(); ++i) {
        append_entry(prompt, history[i], history[i].text, Fidelity::Full, costs[i]);
    }
    return prompt;
}

RecencyCompressionStrategy::RecencyCompressionStrategy(TokenCounter counter, RecencyOptions options)
    : counter_(counter), options_(options), compressor_(counter) {
    if (options_.local_budget == 0) throw InvalidArgument("local_budget must be at least 1");
}

PackedPrompt RecencyCompressionStrategy::pack(std::span<Message> history, std::string_view,
                                              std::size_t budget_tokens,
                                              std::optional<std::string_view> system_preamble) const {
    PackedPrompt prompt;
    std::size_t left = admit_preamble(prompt, counter_, budget_tokens, system_preamble);
    const std::size_t recent_start =
        history.size() > options_.keep_recent ? history.size() - options_.keep_recent : 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const Message& message = history[i];
        const bool recent = i >= recent_start;
        std::string content = recent ? message.text : compressor_.compress(message.text, options_.local_budget, {});
        const std::size_t tokens = counter_.count(content);
        if (tokens > left) {
            ++prompt.stats.dropped_count;
            continue;
        }
        left -= tokens;
        append_entry(prompt, message, std::move(content), recent ? Fidelity::Full : Fidelity::Compressed, tokens);
    }
    return prompt;
}

AfmStrategy::AfmStrategy(FocusPacker packer) : packer_(std::move(packer)) {}

PackedPrompt AfmStrategy::pack(std::span<Message> history, std::string_view current_query,
                               std::size_t budget_tokens,
                               std::optional<std::string_view> system_preamble) const {
    return packer_.pack(history, current_query, budget_tokens, system_preamble).prompt;
}

}  // namespace afm
