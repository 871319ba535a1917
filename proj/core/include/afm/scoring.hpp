#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afm/config.hpp"
#include "afm/model.hpp"

namespace afm {

class Embedder;
class ImportanceClassifier;

// 0.5^(k/h). Throws InvalidArgument when h <= 0.
double recency_weight(std::size_t turns_since, double half_life);

// CRITICAL -> 1; RELEVANT -> max(0,sim)(0.4 + 0.4w); TRIVIAL -> max(0,sim)(0.25w).
double relevance_score(double similarity, double recency, ImportanceLabel label);

// score >= tau_high -> FULL, score >= tau_mid -> COMPRESSED, else PLACEHOLDER.
Fidelity assign_fidelity(double score, const FocusConfig& config);

struct ScoredMessage {
    MessageId message_id = 0;
    double similarity = 0.0;
    double recency_weight = 1.0;
    ImportanceLabel label = ImportanceLabel::Trivial;
    double score = 0.0;
    Fidelity intended = Fidelity::Placeholder;
    std::size_t turns_since = 0;
};

// Scores every message against the query embedding, in chronological order.
// k = current_turn - turn_index. A null classifier forces every label to
// TRIVIAL without touching the per-message label cache.
std::vector<ScoredMessage> score_history(std::span<Message> history,
                                         const Embedding& query_embedding,
                                         const Embedder& embedder,
                                         const ImportanceClassifier* classifier,
                                         const FocusConfig& config,
                                         std::size_t current_turn);

}  // namespace afm
