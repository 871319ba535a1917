#include "afm/gateway.hpp"

#include <cstdio>
#include <fstream>

#include "afm/embeddings.hpp"
#include "afm/error.hpp"
#include "afm/tokenizer.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace afm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json messages_json(std::span<const ChatMessage> messages) {
    ordered_json array = ordered_json::array();
    for (const auto& message : messages) {
        ordered_json m;
        m["role"] = to_string(message.role);
        m["content"] = message.content;
        array.push_back(std::move(m));
    }
    return array;
}

}  // namespace

void GatewayConfig::validate() const {
    if (base_url.empty()) throw GatewayConfigError("gateway base_url is empty");
    if (base_url.find("://") == std::string::npos) {
        throw GatewayConfigError("gateway base_url needs a scheme: " + base_url);
    }
    if (!(timeout_seconds > 0.0)) throw GatewayConfigError("gateway timeout must be positive");
    if (chat_model.empty()) throw GatewayConfigError("gateway chat_model is empty");
}

std::string chat_request_body(std::span<const ChatMessage> messages, const ChatOptions& options) {
    ordered_json body;
    body["model"] = options.model;
    body["messages"] = messages_json(messages);
    body["temperature"] = options.temperature;
    if (options.seed) body["seed"] = *options.seed;
    return body.dump();
}

std::string embed_request_body(std::span<const std::string> texts, std::string_view model) {
    ordered_json body;
    body["model"] = model;
    body["input"] = ordered_json::array();
    for (const auto& text : texts) body["input"].push_back(text);
    return body.dump();
}

std::string messages_digest(std::span<const ChatMessage> messages) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(messages_json(messages).dump())));
    return buffer;
}

StubGateway::StubGateway(Responder responder) : responder_(std::move(responder)) {}

void StubGateway::add_canned(std::string digest, std::string reply) {
    std::lock_guard lock(mutex_);
    canned_[std::move(digest)] = std::move(reply);
}

void StubGateway::add_canned(std::span<const ChatMessage> messages, std::string reply) {
    add_canned(messages_digest(messages), std::move(reply));
}

void StubGateway::fail_with(std::function<void()> thrower) {
    std::lock_guard lock(mutex_);
    thrower_ = std::move(thrower);
}

void StubGateway::load_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw AssetLoadError("cannot open fixtures: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim_ascii(line).empty()) continue;
        try {
            const json j = json::parse(line);
            add_canned(j.at("digest").get<std::string>(), j.at("text").get<std::string>());
        } catch (const json::exception& e) {
            throw AssetLoadError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

ChatReply StubGateway::chat(std::span<const ChatMessage> messages, const ChatOptions& options) {
    ++chat_calls_;
    std::function<void()> thrower;
    Responder responder;
    std::optional<std::string> canned;
    {
        std::lock_guard lock(mutex_);
        thrower = thrower_;
        responder = responder_;
        const auto it = canned_.find(messages_digest(messages));
        if (it != canned_.end()) canned = it->second;
    }
    if (thrower) thrower();

    ChatReply reply;
    if (canned) {
        reply.text = *canned;
    } else if (responder) {
        reply.text = responder(messages, options);
    } else {
        throw GatewayError("stub gateway has no reply for digest " + messages_digest(messages));
    }
    reply.prompt_tokens = TokenCounter{}.count_messages(messages);
    reply.completion_tokens = count_whitespace_tokens(reply.text);
    reply.latency_seconds = 0.0;
    return reply;
}

std::vector<Embedding> StubGateway::embed(std::span<const std::string> texts, std::string_view) {
    ++embed_calls_;
    if (texts.empty()) throw InvalidArgument("embed needs at least one text");
    std::function<void()> thrower;
    {
        std::lock_guard lock(mutex_);
        thrower = thrower_;
    }
    if (thrower) thrower();
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(hash_embed(text));
    return out;
}

}  // namespace afm
