#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <thread>

#include "afm/embeddings.hpp"
#include "afm/error.hpp"
#include "afm/gateway.hpp"
#include "httplib.h"
#include "json.hpp"
#include "support.hpp"

using namespace afm;

namespace {

const std::vector<ChatMessage> kMessages{{Role::System, "sys"}, {Role::User, "hello"}};

// Loopback OpenAI-compatible endpoint with a scripted status and body.
class FakeServer {
public:
    FakeServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            res.status = status;
            res.set_content(body, "application/json");
        });
        server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            last_body = req.body;
            res.status = status;
            res.set_content(body, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    GatewayConfig config() const {
        GatewayConfig c;
        c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
        c.timeout_seconds = 5.0;
        return c;
    }

    int status = 200;
    std::string body;
    std::atomic<int> hits{0};
    std::string last_body;
    std::string last_auth;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST(Gateway, RequestBodiesAreCanonical) {
    ChatOptions o;
    o.model = "gpt-4o-mini";
    o.seed = 7;
    const std::string body = chat_request_body(kMessages, o);
    EXPECT_EQ(body,
              R"({"model":"gpt-4o-mini","messages":[{"role":"system","content":"sys"},{"role":"user","content":"hello"}],"temperature":0.0,"seed":7})");
    EXPECT_EQ(body, chat_request_body(kMessages, o));
    const std::vector<std::string> texts{"a", "b"};
    EXPECT_EQ(embed_request_body(texts, "m"), R"({"model":"m","input":["a","b"]})");
}

TEST(Gateway, DigestIsStableAndContentSensitive) {
    const std::string d = messages_digest(kMessages);
    EXPECT_EQ(d.size(), 16u);
    EXPECT_EQ(d, messages_digest(kMessages));
    const std::vector<ChatMessage> other{{Role::System, "sys"}, {Role::User, "hello!"}};
    EXPECT_NE(d, messages_digest(other));
}

TEST(Gateway, ConfigValidation) {
    GatewayConfig c;
    EXPECT_NO_THROW(c.validate());
    c.timeout_seconds = 0.0;
    EXPECT_THROW(c.validate(), GatewayConfigError);
}

TEST(StubGateway, CannedReplies) {
    StubGateway gw;
    gw.add_canned(kMessages, "ok");
    const ChatReply r = gw.chat(kMessages, {});
    EXPECT_EQ(r.text, "ok");
    EXPECT_GE(r.latency_seconds, 0.0);
    EXPECT_EQ(r.prompt_tokens, 2u);
    const std::vector<ChatMessage> unknown{{Role::User, "?"}};
    EXPECT_THROW(gw.chat(unknown, {}), GatewayError);
    EXPECT_EQ(gw.chat_calls(), 2u);
}

TEST(StubGateway, ResponderIsDeterministic) {
    StubGateway gw([](std::span<const ChatMessage> m, const ChatOptions& o) {
        return m.back().content + "/" + std::to_string(o.seed.value_or(-1));
    });
    ChatOptions o;
    o.seed = 3;
    EXPECT_EQ(gw.chat(kMessages, o).text, "hello/3");
    EXPECT_EQ(gw.chat(kMessages, o).text, "hello/3");
}

TEST(StubGateway, EmbedDelegatesToHashEmbedder) {
    StubGateway gw;
    const std::vector<std::string> texts{"a", "b"};
    const auto v = gw.embed(texts, "m");
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0], hash_embed("a"));
    EXPECT_EQ(v[1], hash_embed("b"));
    EXPECT_THROW(gw.embed({}, "m"), InvalidArgument);
}

TEST(StubGateway, FixtureReplay) {
    testing_support::TempDir dir;
    const auto path = dir.path() / "fixtures.jsonl";
    {
        std::ofstream out(path);
        out << R"({"digest": ")" << messages_digest(kMessages) << R"(", "text": "recorded"})" << "\n\n";
    }
    StubGateway gw;
    gw.load_fixtures(path);
    EXPECT_EQ(gw.chat(kMessages, {}).text, "recorded");
    std::ofstream(dir.path() / "bad.jsonl") << "{nope\n";
    EXPECT_THROW(gw.load_fixtures(dir.path() / "bad.jsonl"), AssetLoadError);
    EXPECT_THROW(gw.load_fixtures(dir.path() / "missing.jsonl"), AssetLoadError);
}

TEST(HttpGateway, MissingKeyFailsBeforeAnyRequest) {
    GatewayConfig c;
    c.api_key_env = "AFM_TEST_KEY_THAT_IS_NOT_SET";
    ::unsetenv(c.api_key_env.c_str());
    const auto before = HttpGateway::requests_issued();
    EXPECT_THROW(HttpGateway{c}, GatewayConfigError);
    EXPECT_EQ(HttpGateway::requests_issued(), before);
}

TEST(HttpGateway, KeyFromEnvironment) {
    FakeServer server;
    server.body = R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})";
    GatewayConfig c = server.config();
    c.api_key_env = "AFM_TEST_KEY";
    ::setenv("AFM_TEST_KEY", "sk-test", 1);
    HttpGateway gw(c);
    EXPECT_EQ(gw.chat(kMessages, {}).text, "hi");
    EXPECT_EQ(server.last_auth, "Bearer sk-test");
    ::unsetenv("AFM_TEST_KEY");
}

TEST(HttpGateway, ChatSuccess) {
    FakeServer server;
    server.body =
        R"({"choices":[{"message":{"role":"assistant","content":"hello back"}}],"usage":{"prompt_tokens":12,"completion_tokens":3}})";
    HttpGateway gw(server.config(), "key");
    ChatOptions o;
    o.seed = 5;
    const ChatReply r = gw.chat(kMessages, o);
    EXPECT_EQ(r.text, "hello back");
    EXPECT_EQ(r.prompt_tokens, 12u);
    EXPECT_EQ(r.completion_tokens, 3u);
    EXPECT_GE(r.latency_seconds, 0.0);
    ChatOptions expected = o;
    expected.model = "gpt-4o-mini";
    EXPECT_EQ(server.last_body, chat_request_body(kMessages, expected));
}

TEST(HttpGateway, RateLimitIsNotRetried) {
    FakeServer server;
    server.status = 429;
    server.body = R"({"error":"rate limited"})";
    HttpGateway gw(server.config(), "key");
    const auto before = HttpGateway::requests_issued();
    try {
        gw.chat(kMessages, {});
        FAIL() << "expected HttpStatusError";
    } catch (const HttpStatusError& e) {
        EXPECT_EQ(e.status(), 429);
    }
    EXPECT_EQ(server.hits.load(), 1);
    EXPECT_EQ(HttpGateway::requests_issued(), before + 1);
}

TEST(HttpGateway, MalformedPayloadIsDecodeError) {
    FakeServer server;
    server.body = R"({"choices":[]})";
    HttpGateway gw(server.config(), "key");
    EXPECT_THROW(gw.chat(kMessages, {}), DecodeError);
    server.body = "not json";
    EXPECT_THROW(gw.chat(kMessages, {}), DecodeError);
}

TEST(HttpGateway, EmbeddingsInOrder) {
    FakeServer server;
    server.body = R"({"data":[{"index":1,"embedding":[0.0,1.0]},{"index":0,"embedding":[1.0,0.0]}]})";
    HttpGateway gw(server.config(), "key");
    const std::vector<std::string> texts{"a", "b"};
    const auto v = gw.embed(texts, "text-embedding-3-small");
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0], (Embedding{1.0, 0.0}));
    EXPECT_EQ(v[1], (Embedding{0.0, 1.0}));
    EXPECT_EQ(server.last_body, embed_request_body(texts, "text-embedding-3-small"));
    EXPECT_THROW(gw.embed({}, "m"), InvalidArgument);
    server.body = R"({"data":[{"index":0,"embedding":[1.0]}]})";
    EXPECT_THROW(gw.embed(texts, "m"), DecodeError);
}

TEST(HttpGateway, UnreachableHostIsNetworkError) {
    GatewayConfig c;
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    c.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    c.timeout_seconds = 2.0;
    HttpGateway gw(c, "key");
    EXPECT_THROW(gw.chat(kMessages, {}), NetworkError);
}
