#include "afm/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "afm/embeddings.hpp"
#include "afm/error.hpp"
#include "afm/importance.hpp"

namespace afm {

double recency_weight(std::size_t turns_since, double half_life) {
    if (!(half_life > 0.0)) throw InvalidArgument("half-life must be positive");
    return std::pow(0.5, static_cast<double>(turns_since) / half_life);
}

double relevance_score(double similarity, double recency, ImportanceLabel label) {
    const double sim = std::max(0.0, similarity);
    switch (label) {
        case ImportanceLabel::Critical: return 1.0;
        case ImportanceLabel::Relevant: return sim * (0.4 + 0.4 * recency);
        case ImportanceLabel::Trivial: return sim * (0.25 * recency);
    }
    return 0.0;
}

Fidelity assign_fidelity(double score, const FocusConfig& config) {
    if (score >= config.tau_high) return Fidelity::Full;
    if (score >= config.tau_mid) return Fidelity::Compressed;
    return Fidelity::Placeholder;
}

std::vector<ScoredMessage> score_history(std::span<Message> history,
                                         const Embedding& query_embedding,
                                         const Embedder& embedder,
                                         const ImportanceClassifier* classifier,
                                         const FocusConfig& config,
                                         std::size_t current_turn) {
    std::vector<ScoredMessage> scored;
    scored.reserve(history.size());
    for (Message& message : history) {
        ScoredMessage s;
        s.message_id = message.id;
        s.turns_since = current_turn >= message.turn_index ? current_turn - message.turn_index : 0;
        s.similarity = cosine(embedding_of(message, embedder), query_embedding);
        s.recency_weight = recency_weight(s.turns_since, config.half_life_turns);
        s.label = classifier != nullptr ? importance_of(message, *classifier) : ImportanceLabel::Trivial;
        s.score = relevance_score(s.similarity, s.recency_weight, s.label);
        s.intended = assign_fidelity(s.score, config);
        scored.push_back(s);
    }
    return scored;
}

}  // namespace afm
