#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "afm/error.hpp"
#include "afm/gateway.hpp"
#include "httplib.h"
#include "json.hpp"

namespace afm {

namespace {

std::atomic<std::uint64_t> g_requests{0};

struct Endpoint {
    std::string scheme_host_port;
    std::string path_prefix;
};

Endpoint split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    const auto path_start = base_url.find('/', scheme_end + 3);
    Endpoint endpoint;
    if (path_start == std::string::npos) {
        endpoint.scheme_host_port = base_url;
    } else {
        endpoint.scheme_host_port = base_url.substr(0, path_start);
        endpoint.path_prefix = base_url.substr(path_start);
    }
    while (!endpoint.path_prefix.empty() && endpoint.path_prefix.back() == '/') {
        endpoint.path_prefix.pop_back();
    }
    return endpoint;
}

std::string resolve_key(const GatewayConfig& config) {
    const char* value = std::getenv(config.api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw GatewayConfigError("environment variable " + config.api_key_env + " is not set");
    }
    return value;
}

}  // namespace

HttpGateway::HttpGateway(GatewayConfig config) : config_(std::move(config)) {
    config_.validate();
    api_key_ = resolve_key(config_);
}

HttpGateway::HttpGateway(GatewayConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    config_.validate();
    if (api_key_.empty()) throw GatewayConfigError("empty API key");
}

std::uint64_t HttpGateway::requests_issued() { return g_requests.load(); }

std::string HttpGateway::post(const std::string& path, const std::string& body, double& latency_seconds) {
    const Endpoint endpoint = split_base_url(config_.base_url);
    httplib::Client client(endpoint.scheme_host_port);
    if (!client.is_valid()) {
        throw GatewayConfigError("unsupported base_url (is TLS support compiled in?): " + config_.base_url);
    }
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    const auto seconds = static_cast<time_t>(std::floor(config_.timeout_seconds));
    const auto micros = static_cast<time_t>((timeout.count() - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    ++g_requests;
    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(endpoint.path_prefix + path, headers, body, "application/json");
    latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!result) {
        throw NetworkError("request to " + config_.base_url + path + " failed: " +
                           httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
        throw HttpStatusError(result->status, result->body);
    }
    return result->body;
}

ChatReply HttpGateway::chat(std::span<const ChatMessage> messages, const ChatOptions& options) {
    ChatOptions effective = options;
    if (effective.model.empty()) effective.model = config_.chat_model;
    ChatReply reply;
    const std::string body = post("/chat/completions", chat_request_body(messages, effective),
                                  reply.latency_seconds);
    try {
        const auto j = nlohmann::json::parse(body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        reply.text = content.is_null() ? std::string{} : content.get<std::string>();
        if (j.contains("usage")) {
            reply.prompt_tokens = j["usage"].value("prompt_tokens", std::size_t{0});
            reply.completion_tokens = j["usage"].value("completion_tokens", std::size_t{0});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("unexpected chat completion payload: ") + e.what());
    }
    return reply;
}

std::vector<Embedding> HttpGateway::embed(std::span<const std::string> texts, std::string_view model) {
    if (texts.empty()) throw InvalidArgument("embed needs at least one text");
    const std::string effective_model = model.empty() ? config_.embed_model : std::string(model);
    double latency = 0.0;
    const std::string body = post("/embeddings", embed_request_body(texts, effective_model), latency);
    std::vector<Embedding> vectors(texts.size());
    try {
        const auto j = nlohmann::json::parse(body);
        const auto& data = j.at("data");
        if (data.size() != texts.size()) throw DecodeError("embedding count does not match input count");
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::size_t index = data[i].value("index", i);
            if (index >= vectors.size()) throw DecodeError("embedding index out of range");
            vectors[index] = data[i].at("embedding").get<Embedding>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("unexpected embeddings payload: ") + e.what());
    }
    return vectors;
}

}  // namespace afm
