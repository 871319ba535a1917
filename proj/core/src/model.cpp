#include "afm/model.hpp"

#include <sstream>

#include "afm/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace afm {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

std::string_view to_string(ImportanceLabel label) {
    switch (label) {
        case ImportanceLabel::Critical: return "critical";
        case ImportanceLabel::Relevant: return "relevant";
        case ImportanceLabel::Trivial: return "trivial";
    }
    return "trivial";
}

std::string_view to_string(Fidelity fidelity) {
    switch (fidelity) {
        case Fidelity::Full: return "full";
        case Fidelity::Compressed: return "compressed";
        case Fidelity::Placeholder: return "placeholder";
    }
    return "placeholder";
}

Role parse_role(std::string_view text) {
    const std::string lower = detail::to_lower_ascii(text);
    if (lower == "system") return Role::System;
    if (lower == "user") return Role::User;
    if (lower == "assistant") return Role::Assistant;
    throw InvalidArgument("unknown role: " + std::string(text));
}

ImportanceLabel parse_importance(std::string_view text) {
    const std::string lower = detail::to_lower_ascii(text);
    if (lower == "critical") return ImportanceLabel::Critical;
    if (lower == "relevant") return ImportanceLabel::Relevant;
    if (lower == "trivial") return ImportanceLabel::Trivial;
    throw InvalidArgument("unknown importance label: " + std::string(text));
}

Fidelity parse_fidelity(std::string_view text) {
    const std::string lower = detail::to_lower_ascii(text);
    if (lower == "full") return Fidelity::Full;
    if (lower == "compressed") return Fidelity::Compressed;
    if (lower == "placeholder" || lower == "stub") return Fidelity::Placeholder;
    throw InvalidArgument("unknown fidelity: " + std::string(text));
}

MessageId append_message(std::vector<Message>& history, Role role, std::string text) {
    Message message;
    message.id = history.empty() ? 0 : history.back().id + 1;
    message.turn_index = history.empty() ? 0 : history.back().turn_index + 1;
    message.role = role;
    message.text = std::move(text);
    history.push_back(std::move(message));
    return history.back().id;
}

std::string message_to_json(const Message& message) {
    ordered_json j;
    j["id"] = message.id;
    j["role"] = to_string(message.role);
    j["text"] = message.text;
    j["turn_index"] = message.turn_index;
    return j.dump();
}

Message message_from_json(std::string_view json_text) {
    try {
        const json j = json::parse(json_text);
        Message message;
        message.id = j.at("id").get<MessageId>();
        message.role = parse_role(j.at("role").get<std::string>());
        message.text = j.at("text").get<std::string>();
        message.turn_index = j.at("turn_index").get<std::size_t>();
        return message;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed message JSON: ") + e.what());
    }
}

std::vector<ChatMessage> PackedPrompt::messages() const {
    std::vector<ChatMessage> out;
    out.reserve(entries.size());
    for (const auto& entry : entries) out.push_back({entry.role, entry.content});
    return out;
}

std::string to_jsonl(const PackedPrompt& prompt) {
    std::string out;
    for (const auto& entry : prompt.entries) {
        ordered_json j;
        j["role"] = to_string(entry.role);
        j["content"] = entry.content;
        j["fidelity"] = to_string(entry.fidelity);
        if (entry.message_id) {
            j["id"] = *entry.message_id;
        } else {
            j["id"] = nullptr;
        }
        j["tokens"] = entry.tokens;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<PackedEntry> entries_from_jsonl(std::string_view jsonl) {
    std::vector<PackedEntry> entries;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim_ascii(line).empty()) continue;
        try {
            const json j = json::parse(line);
            PackedEntry entry;
            entry.role = parse_role(j.at("role").get<std::string>());
            entry.content = j.at("content").get<std::string>();
            entry.fidelity = parse_fidelity(j.at("fidelity").get<std::string>());
            if (j.contains("id") && !j["id"].is_null()) entry.message_id = j["id"].get<MessageId>();
            entry.tokens = j.value("tokens", std::size_t{0});
            entries.push_back(std::move(entry));
        } catch (const json::exception& e) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return entries;
}

}  // namespace afm
