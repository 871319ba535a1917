#pragma once

#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "afm/model.hpp"

namespace afm {

class Gateway;

class ImportanceClassifier {
public:
    virtual ~ImportanceClassifier() = default;

    virtual ImportanceLabel classify(const Message& message) const = 0;
};

// Offline default: every message is TRIVIAL and nothing leaves the process.
class DefaultClassifier final : public ImportanceClassifier {
public:
    ImportanceLabel classify(const Message&) const override { return ImportanceLabel::Trivial; }
};

struct ImportanceRule {
    std::string pattern;  // ECMAScript regex, matched case-insensitively
    ImportanceLabel label = ImportanceLabel::Trivial;
};

// Ordered regex table; the first matching rule wins, TRIVIAL otherwise.
class RuleClassifier final : public ImportanceClassifier {
public:
    explicit RuleClassifier(std::vector<ImportanceRule> rules);

    // [{"pattern": "...", "label": "critical"}, ...]. Throws SchemaError.
    static RuleClassifier from_json(std::string_view json_text);
    static RuleClassifier bundled();

    ImportanceLabel classify(const Message& message) const override;

    const std::vector<ImportanceRule>& rules() const { return rules_; }

private:
    std::vector<ImportanceRule> rules_;
    std::vector<std::regex> compiled_;
};

// Asks a small chat model for a label. Gateway errors propagate and an
// unparseable reply raises ParseError.
class RemoteClassifier final : public ImportanceClassifier {
public:
    RemoteClassifier(std::shared_ptr<Gateway> gateway, std::string model,
                     std::string prompt_template = {});

    ImportanceLabel classify(const Message& message) const override;

    // The user-turn prompt sent for a given message text.
    std::string prompt_for(std::string_view text) const;

private:
    std::shared_ptr<Gateway> gateway_;
    std::string model_;
    std::string prompt_template_;
};

// Earliest whole-word, case-insensitive occurrence of CRITICAL, RELEVANT or
// TRIVIAL in the reply.
std::optional<ImportanceLabel> parse_importance_reply(std::string_view reply);

// Cached label; calls the classifier at most once per message.
ImportanceLabel importance_of(Message& message, const ImportanceClassifier& classifier);

}  // namespace afm
