#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afm/compression.hpp"
#include "afm/config.hpp"
#include "afm/embeddings.hpp"
#include "afm/importance.hpp"
#include "afm/model.hpp"
#include "afm/packing.hpp"
#include "afm/tokenizer.hpp"

namespace afm {

struct FocusBackends {
    std::shared_ptr<const Embedder> embedder;
    std::shared_ptr<const ImportanceClassifier> classifier;
    std::shared_ptr<const Compressor> compressor;
    TokenCounter counter;
};

// Hashing embedder, TRIVIAL-by-default classifier, heuristic compressor.
FocusBackends offline_backends(TokenCounter counter = {});

// Per-message packing decision, as reported by explain().
struct DecisionRow {
    MessageId id = 0;
    Role role = Role::User;
    double similarity = 0.0;
    double recency = 1.0;
    ImportanceLabel label = ImportanceLabel::Trivial;
    double score = 0.0;
    Fidelity intended = Fidelity::Placeholder;
    std::optional<Fidelity> achieved;  // empty when dropped
    std::size_t tokens_spent = 0;
};

struct ContextReport {
    PackedPrompt prompt;
    std::vector<DecisionRow> rows;
    std::size_t preamble_tokens = 0;
    bool preamble_included = false;
};

// The scoring and packing engine, independent of who owns the history.
class FocusPacker {
public:
    FocusPacker(FocusConfig config, FocusBackends backends, AblationFlags ablations = {});

    // Scores every message, then packs the preamble followed by the history
    // in chronological order under budget_tokens. Lazy caches on the
    // messages are filled as needed. Backend errors propagate.
    ContextReport pack(std::span<Message> history, std::string_view current_query,
                       std::size_t budget_tokens,
                       std::optional<std::string_view> system_preamble = std::nullopt) const;

    const FocusConfig& config() const { return config_; }
    const FocusBackends& backends() const { return backends_; }
    const AblationFlags& ablations() const { return ablations_; }

private:
    FocusConfig config_;
    FocusBackends backends_;
    AblationFlags ablations_;
};

// Owns one conversation. Calls are expected to be serialized by the caller.
class FocusManager {
public:
    FocusManager(FocusConfig config, FocusBackends backends, AblationFlags ablations = {});

    // Appends without scoring or any backend call.
    MessageId add_message(Role role, std::string content);

    PackedPrompt build_context(std::string_view current_query, std::size_t budget_tokens,
                               std::optional<std::string_view> system_preamble = std::nullopt);

    ContextReport explain(std::string_view current_query, std::size_t budget_tokens,
                          std::optional<std::string_view> system_preamble = std::nullopt);

    const std::vector<Message>& history() const { return history_; }
    const FocusPacker& packer() const { return packer_; }

private:
    FocusPacker packer_;
    std::vector<Message> history_;
};

// Machine-readable explain output: one JSON object per row plus a trailing
// stats object.
std::string explain_to_json(const ContextReport& report);

}  // namespace afm
