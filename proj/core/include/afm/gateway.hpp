#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afm/model.hpp"

namespace afm {

struct ChatOptions {
    std::string model;
    double temperature = 0.0;
    std::optional<std::int64_t> seed;
};

struct ChatReply {
    std::string text;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    double latency_seconds = 0.0;  // request submission to completion receipt
};

// Chat-completions and embeddings client. Implementations may be shared
// across threads. Nothing is retried.
class Gateway {
public:
    virtual ~Gateway() = default;

    virtual ChatReply chat(std::span<const ChatMessage> messages, const ChatOptions& options) = 0;

    // One vector per input text, in order. Throws InvalidArgument on an empty list.
    virtual std::vector<Embedding> embed(std::span<const std::string> texts,
                                         std::string_view model) = 0;
};

struct GatewayConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string chat_model = "gpt-4o-mini";
    std::string embed_model = "text-embedding-3-small";
    double timeout_seconds = 60.0;

    void validate() const;  // throws GatewayConfigError
};

// Canonical request bodies: fixed field order, no insignificant whitespace.
std::string chat_request_body(std::span<const ChatMessage> messages, const ChatOptions& options);
std::string embed_request_body(std::span<const std::string> texts, std::string_view model);

// Hex FNV-1a digest of the canonical serialization of the messages.
std::string messages_digest(std::span<const ChatMessage> messages);

// OpenAI-compatible HTTP client: POST {base_url}/chat/completions and
// {base_url}/embeddings with a bearer key read from the environment.
class HttpGateway final : public Gateway {
public:
    // Throws GatewayConfigError when the key variable is unset or empty.
    explicit HttpGateway(GatewayConfig config);
    // Explicit key; used when the caller already resolved credentials.
    HttpGateway(GatewayConfig config, std::string api_key);

    ChatReply chat(std::span<const ChatMessage> messages, const ChatOptions& options) override;
    std::vector<Embedding> embed(std::span<const std::string> texts,
                                 std::string_view model) override;

    const GatewayConfig& config() const { return config_; }

    // Process-wide count of HTTP requests attempted by any HttpGateway.
    static std::uint64_t requests_issued();

private:
    std::string post(const std::string& path, const std::string& body, double& latency_seconds);

    GatewayConfig config_;
    std::string api_key_;
};

// Deterministic offline gateway. Replies come from a canned map keyed by
// messages_digest(), then from an optional responder; otherwise the call
// fails. Embeddings come from hash_embed. Latency is reported as 0.
class StubGateway final : public Gateway {
public:
    using Responder =
        std::function<std::string(std::span<const ChatMessage>, const ChatOptions&)>;

    StubGateway() = default;
    explicit StubGateway(Responder responder);

    void add_canned(std::string digest, std::string reply);
    void add_canned(std::span<const ChatMessage> messages, std::string reply);

    // Recorded fixtures, one JSON object per line: {"digest": ..., "text": ...}.
    // Throws AssetLoadError.
    void load_fixtures(const std::filesystem::path& path);

    ChatReply chat(std::span<const ChatMessage> messages, const ChatOptions& options) override;
    std::vector<Embedding> embed(std::span<const std::string> texts,
                                 std::string_view model) override;

    std::size_t chat_calls() const { return chat_calls_.load(); }
    std::size_t embed_calls() const { return embed_calls_.load(); }

    // Injects a failure for every subsequent call; used to exercise error paths.
    void fail_with(std::function<void()> thrower);

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::string> canned_;
    Responder responder_;
    std::function<void()> thrower_;
    std::atomic<std::size_t> chat_calls_{0};
    std::atomic<std::size_t> embed_calls_{0};
};

}  // namespace afm
