#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "chronos/http.hpp"

using namespace chronos;

namespace {

/// Local server on an ephemeral port, torn down with the fixture.
class LocalServer : public ::testing::Test {
protected:
    void SetUp() override {
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    void TearDown() override {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

    HttpOptions options(const std::string& path) const {
        HttpOptions o;
        o.endpoint = url(path);
        o.model = "test-model";
        o.api_key_env = "CHRONOS_HTTP_TEST_KEY";
        o.timeout_s = 5;
        o.attempts = 3;
        o.backoff_ms = 1;
        return o;
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace

TEST_F(LocalServer, ChatRequestShapeAndAuth) {
    nlohmann::json seen;
    std::string auth;
    server_.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices":[{"message":{"content":"ANSWER: Oracle"}}],"usage":{"prompt_tokens":12,"completion_tokens":3}})",
                        "application/json");
    });
    ::setenv("CHRONOS_HTTP_TEST_KEY", "sekret", 1);
    HttpChatBackend backend(options("/v1/chat/completions"));
    const auto c = backend.complete("hello");
    ::unsetenv("CHRONOS_HTTP_TEST_KEY");
    EXPECT_EQ(c.text, "ANSWER: Oracle");
    EXPECT_EQ(c.prompt_tokens, 12);
    EXPECT_EQ(c.completion_tokens, 3);
    EXPECT_EQ(auth, "Bearer sekret");
    EXPECT_EQ(seen["model"], "test-model");
    EXPECT_EQ(seen["temperature"], 0);
    EXPECT_EQ(seen["messages"][0]["role"], "user");
    EXPECT_EQ(seen["messages"][0]["content"], "hello");
}

TEST_F(LocalServer, RetriesServerErrors) {
    std::atomic<int> calls{0};
    server_.Post("/chat", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})", "application/json");
    });
    HttpChatBackend backend(options("/chat"));
    EXPECT_EQ(backend.complete("x").text, "ok");
    EXPECT_EQ(calls.load(), 3);
}

TEST_F(LocalServer, GivesUpAfterAttemptsAndOnClientErrors) {
    std::atomic<int> calls{0};
    server_.Post("/down", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 500;
    });
    server_.Post("/denied", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 401;
        res.set_content("no", "text/plain");
    });
    EXPECT_THROW(HttpChatBackend(options("/down")).complete("x"), BackendError);
    EXPECT_EQ(calls.load(), 3);
    calls = 0;
    EXPECT_THROW(HttpChatBackend(options("/denied")).complete("x"), BackendError);
    EXPECT_EQ(calls.load(), 1);
}

TEST_F(LocalServer, EmbeddingShapes) {
    nlohmann::json seen;
    server_.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        nlohmann::json out{{"data", nlohmann::json::array()}};
        // reversed to exercise the index field
        for (int i = static_cast<int>(seen["input"].size()) - 1; i >= 0; --i) {
            out["data"].push_back({{"index", i}, {"embedding", {1.0 * i, 0.0, 1.0}}});
        }
        res.set_content(out.dump(), "application/json");
    });
    RemoteEmbedder embedder(options("/embed"), 3);
    std::vector<std::string> texts{"a", "b"};
    const auto vecs = embedder.embed_batch(texts);
    EXPECT_EQ(seen["input"], nlohmann::json({"a", "b"}));
    EXPECT_EQ(seen["model"], "test-model");
    ASSERT_EQ(vecs.size(), 2u);
    EXPECT_EQ(vecs[1].values, (std::vector<double>{1.0, 0.0, 1.0}));

    RemoteEmbedder wrong_dim(options("/embed"), 4);
    EXPECT_THROW(wrong_dim.embed("a"), EmbeddingError);
}

TEST(HttpParsing, ResponseShapes) {
    EXPECT_THROW(HttpChatBackend::parse_response(nlohmann::json{{"choices", nlohmann::json::array()}}), BackendError);
    const auto v = RemoteEmbedder::parse_response(nlohmann::json{{"embeddings", {{1.0, 2.0}}}}, 1);
    EXPECT_EQ(v[0].values, (std::vector<double>{1.0, 2.0}));
    EXPECT_THROW(RemoteEmbedder::parse_response(nlohmann::json{{"embeddings", {{1.0}}}}, 2), EmbeddingError);
    EXPECT_THROW(HttpChatBackend(HttpOptions{}), BackendError);
}

TEST(HttpParsing, ConnectionRefused) {
    HttpOptions o;
    o.endpoint = "http://127.0.0.1:9/none";
    o.attempts = 2;
    o.backoff_ms = 1;
    o.timeout_s = 1;
    EXPECT_THROW(HttpChatBackend(o).complete("x"), BackendError);
}
