#include "afm/focus_manager.hpp"

#include "afm/error.hpp"
#include "afm/scoring.hpp"
#include "json.hpp"

namespace afm {

FocusBackends offline_backends(TokenCounter counter) {
    FocusBackends backends;
    backends.embedder = std::make_shared<HashingEmbedder>();
    backends.classifier = std::make_shared<DefaultClassifier>();
    backends.compressor = std::make_shared<HeuristicCompressor>(counter);
    backends.counter = counter;
    return backends;
}

FocusPacker::FocusPacker(FocusConfig config, FocusBackends backends, AblationFlags ablations)
    : config_(std::move(config)), backends_(std::move(backends)), ablations_(ablations) {
    config_.validate();
    if (!backends_.embedder) throw InvalidArgument("FocusPacker needs an embedder");
    if (!backends_.compressor) throw InvalidArgument("FocusPacker needs a compressor");
    if (!backends_.classifier) backends_.classifier = std::make_shared<DefaultClassifier>();
}

ContextReport FocusPacker::pack(std::span<Message> history, std::string_view current_query,
                                std::size_t budget_tokens,
                                std::optional<std::string_view> system_preamble) const {
    const TokenCounter& counter = backends_.counter;

    std::vector<ScoredMessage> scored;
    if (!history.empty()) {
        const Embedding query = backends_.embedder->embed(current_query);
        const ImportanceClassifier* classifier =
            ablations_.no_importance ? nullptr : backends_.classifier.get();
        scored = score_history(history, query, *backends_.embedder, classifier, config_,
                               history.back().turn_index);
    }

    ContextReport report;
    std::size_t left = budget_tokens;
    if (system_preamble) {
        const std::size_t tokens = counter.count(*system_preamble);
        report.preamble_tokens = tokens;
        if (tokens <= left) {
            left -= tokens;
            report.preamble_included = true;
            report.prompt.entries.push_back(
                {Role::System, std::string(*system_preamble), Fidelity::Full, std::nullopt, tokens});
        }
    }

    // Rendered representations, kept so the chosen one need not be rebuilt.
    std::vector<std::string> rendered(history.size());
    const auto render = [&](std::size_t i, Fidelity rung) -> std::string {
        Message& message = history[i];
        switch (rung) {
            case Fidelity::Full: return message.text;
            case Fidelity::Compressed:
                return summary_of(message, *backends_.compressor, config_.compressed_target_tokens,
                                  current_query);
            case Fidelity::Placeholder: return render_stub(config_, message);
        }
        return {};
    };

    std::vector<Fidelity> intended;
    intended.reserve(scored.size());
    for (const auto& s : scored) intended.push_back(s.intended);

    const auto decisions = pack_greedy(intended, left, ablations_, [&](std::size_t i, Fidelity rung) {
        rendered[i] = render(i, rung);
        return counter.count(rendered[i]);
    });

    PackStats& stats = report.prompt.stats;
    stats.total_tokens = report.preamble_included ? report.preamble_tokens : 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const PackDecision& d = decisions[i];
        const ScoredMessage& s = scored[i];
        report.rows.push_back({history[i].id, history[i].role, s.similarity, s.recency_weight, s.label,
                               s.score, s.intended, d.achieved, d.achieved ? d.tokens : 0});
        if (!d.achieved) {
            ++stats.dropped_count;
            continue;
        }
        stats.total_tokens += d.tokens;
        switch (*d.achieved) {
            case Fidelity::Full: ++stats.full_count; break;
            case Fidelity::Compressed: ++stats.compressed_count; break;
            case Fidelity::Placeholder: ++stats.stub_count; break;
        }
        // The ladder's last attempt for this message is the accepted rung,
        // so rendered[i] already holds its text.
        report.prompt.entries.push_back(
            {history[i].role, std::move(rendered[i]), *d.achieved, history[i].id, d.tokens});
    }
    return report;
}

FocusManager::FocusManager(FocusConfig config, FocusBackends backends, AblationFlags ablations)
    : packer_(std::move(config), std::move(backends), ablations) {}

MessageId FocusManager::add_message(Role role, std::string content) {
    return append_message(history_, role, std::move(content));
}

PackedPrompt FocusManager::build_context(std::string_view current_query, std::size_t budget_tokens,
                                         std::optional<std::string_view> system_preamble) {
    return packer_.pack(history_, current_query, budget_tokens, system_preamble).prompt;
}

ContextReport FocusManager::explain(std::string_view current_query, std::size_t budget_tokens,
                                    std::optional<std::string_view> system_preamble) {
    return packer_.pack(history_, current_query, budget_tokens, system_preamble);
}

std::string explain_to_json(const ContextReport& report) {
    using nlohmann::ordered_json;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json j;
        j["id"] = row.id;
        j["role"] = to_string(row.role);
        j["sim"] = row.similarity;
        j["recency"] = row.recency;
        j["label"] = to_string(row.label);
        j["score"] = row.score;
        j["intended"] = to_string(row.intended);
        if (row.achieved) {
            j["achieved"] = to_string(*row.achieved);
        } else {
            j["achieved"] = "dropped";
        }
        j["tokens_spent"] = row.tokens_spent;
        rows.push_back(std::move(j));
    }
    ordered_json stats;
    const PackStats& s = report.prompt.stats;
    stats["total_tokens"] = s.total_tokens;
    stats["full_count"] = s.full_count;
    stats["compressed_count"] = s.compressed_count;
    stats["stub_count"] = s.stub_count;
    stats["dropped_count"] = s.dropped_count;
    stats["preamble_tokens"] = report.preamble_included ? report.preamble_tokens : 0;

    ordered_json root;
    root["rows"] = std::move(rows);
    root["stats"] = std::move(stats);
    root["entries"] = ordered_json::array();
    for (const auto& entry : report.prompt.entries) {
        ordered_json e;
        e["role"] = to_string(entry.role);
        e["content"] = entry.content;
        e["fidelity"] = to_string(entry.fidelity);
        if (entry.message_id) {
            e["id"] = *entry.message_id;
        } else {
            e["id"] = nullptr;
        }
        e["tokens"] = entry.tokens;
        root["entries"].push_back(std::move(e));
    }
    return root.dump(2);
}

}  // namespace afm
