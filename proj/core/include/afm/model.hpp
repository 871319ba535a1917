#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace afm {

enum class Role { System, User, Assistant };

enum class ImportanceLabel { Critical, Relevant, Trivial };

// Declared lowest to highest so the built-in enum comparisons give
// FULL > COMPRESSED > PLACEHOLDER.
enum class Fidelity { Placeholder = 0, Compressed = 1, Full = 2 };

std::string_view to_string(Role role);
std::string_view to_string(ImportanceLabel label);
std::string_view to_string(Fidelity fidelity);

// Parsers accept the lowercase wire names (case-insensitive); throw InvalidArgument.
Role parse_role(std::string_view text);
ImportanceLabel parse_importance(std::string_view text);
Fidelity parse_fidelity(std::string_view text);

using MessageId = std::uint64_t;
using Embedding = std::vector<double>;

// One dialogue turn. The optional members are write-once caches filled
// lazily by the embedding, importance and compression layers.
struct Message {
    MessageId id = 0;
    Role role = Role::User;
    std::string text;
    std::size_t turn_index = 0;

    std::optional<Embedding> embedding;
    std::optional<ImportanceLabel> importance;
    std::optional<std::string> summary;
};

// Appends a message whose id and turn_index continue the sequence.
MessageId append_message(std::vector<Message>& history, Role role, std::string text);

// {id, role, text, turn_index}; caches are not serialized.
std::string message_to_json(const Message& message);
Message message_from_json(std::string_view json_text);

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct PackStats {
    std::size_t total_tokens = 0;
    std::size_t full_count = 0;
    std::size_t compressed_count = 0;
    std::size_t stub_count = 0;
    std::size_t dropped_count = 0;

    friend bool operator==(const PackStats&, const PackStats&) = default;
};

struct PackedEntry {
    Role role = Role::User;
    std::string content;
    Fidelity fidelity = Fidelity::Full;
    std::optional<MessageId> message_id;  // empty for the system preamble
    std::size_t tokens = 0;

    friend bool operator==(const PackedEntry&, const PackedEntry&) = default;
};

// A chronological prompt; dropped history messages have no entry and are
// only reflected in stats.dropped_count.
struct PackedPrompt {
    std::vector<PackedEntry> entries;
    PackStats stats;

    std::vector<ChatMessage> messages() const;

    friend bool operator==(const PackedPrompt&, const PackedPrompt&) = default;
};

// One JSON object per line: {"role","content","fidelity","id"}.
std::string to_jsonl(const PackedPrompt& prompt);
std::vector<PackedEntry> entries_from_jsonl(std::string_view jsonl);

}  // namespace afm
