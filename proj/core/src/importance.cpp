#include "afm/importance.hpp"

#include <array>
#include <utility>

#include "afm/assets.hpp"
#include "afm/error.hpp"
#include "afm/gateway.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace afm {

RuleClassifier::RuleClassifier(std::vector<ImportanceRule> rules) : rules_(std::move(rules)) {
    compiled_.reserve(rules_.size());
    for (const auto& rule : rules_) {
        try {
            compiled_.emplace_back(rule.pattern,
                                   std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw SchemaError("invalid rule pattern '" + rule.pattern + "': " + e.what());
        }
    }
}

RuleClassifier RuleClassifier::from_json(std::string_view json_text) {
    using nlohmann::json;
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("rules file is not valid JSON: ") + e.what());
    }
    if (!root.is_array()) throw SchemaError("rules file must be a JSON array");
    std::vector<ImportanceRule> rules;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const std::string where = "rules[" + std::to_string(i) + "]";
        const json& item = root[i];
        if (!item.is_object() || !item.contains("pattern") || !item["pattern"].is_string()) {
            throw SchemaError(where + ".pattern: missing or not a string");
        }
        if (!item.contains("label") || !item["label"].is_string()) {
            throw SchemaError(where + ".label: missing or not a string");
        }
        try {
            rules.push_back({item["pattern"].get<std::string>(),
                             parse_importance(item["label"].get<std::string>())});
        } catch (const InvalidArgument& e) {
            throw SchemaError(where + ".label: " + e.what());
        }
    }
    return RuleClassifier(std::move(rules));
}

RuleClassifier RuleClassifier::bundled() {
    const auto text = bundled_asset("rules/importance_rules_v1.json");
    if (!text) throw AssetLoadError("bundled importance rules are missing");
    return from_json(*text);
}

ImportanceLabel RuleClassifier::classify(const Message& message) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (std::regex_search(message.text, compiled_[i])) return rules_[i].label;
    }
    return ImportanceLabel::Trivial;
}

std::optional<ImportanceLabel> parse_importance_reply(std::string_view reply) {
    static constexpr std::array<std::pair<std::string_view, ImportanceLabel>, 3> kLabels{{
        {"CRITICAL", ImportanceLabel::Critical},
        {"RELEVANT", ImportanceLabel::Relevant},
        {"TRIVIAL", ImportanceLabel::Trivial},
    }};
    std::optional<ImportanceLabel> found;
    std::size_t earliest = std::string_view::npos;
    for (const auto& [word, label] : kLabels) {
        const std::size_t pos = detail::find_word_ci(reply, word);
        if (pos < earliest) {
            earliest = pos;
            found = label;
        }
    }
    return found;
}

RemoteClassifier::RemoteClassifier(std::shared_ptr<Gateway> gateway, std::string model,
                                   std::string prompt_template)
    : gateway_(std::move(gateway)), model_(std::move(model)), prompt_template_(std::move(prompt_template)) {
    if (!gateway_) throw InvalidArgument("RemoteClassifier needs a gateway");
    if (prompt_template_.empty()) {
        const auto bundled = bundled_asset("prompts/classify_v1.txt");
        if (!bundled) throw AssetLoadError("bundled classifier prompt is missing");
        prompt_template_ = std::string(*bundled);
    }
}

std::string RemoteClassifier::prompt_for(std::string_view text) const {
    std::string prompt = prompt_template_;
    detail::replace_all(prompt, "{text}", text);
    return prompt;
}

ImportanceLabel RemoteClassifier::classify(const Message& message) const {
    const std::array<ChatMessage, 1> request{ChatMessage{Role::User, prompt_for(message.text)}};
    ChatOptions options;
    options.model = model_;
    options.temperature = 0.0;
    const ChatReply reply = gateway_->chat(request, options);
    if (const auto label = parse_importance_reply(reply.text)) return *label;
    throw ParseError("importance classifier reply has no label: " + reply.text);
}

ImportanceLabel importance_of(Message& message, const ImportanceClassifier& classifier) {
    if (!message.importance) message.importance = classifier.classify(message);
    return *message.importance;
}

}  // namespace afm
