#pragma once
// HTTP-backed providers: a chat-completion LLM backend and a remote
// embedding provider. Both speak JSON over POST, send the credential from a
// configurable environment variable as a bearer token, retry transient
// failures with exponential backoff, and cap concurrent requests.
//
// Chat request:        {"model", "temperature": 0, "messages": [{"role": "user", "content"}]}
// Chat response:       {"choices": [{"message": {"content"}}], "usage": {"prompt_tokens", "completion_tokens"}}
// Embedding request:   {"model", "input": [text, ...]}
// Embedding response:  {"data": [{"index", "embedding": [float...]}]}  or  {"embeddings": [[float...]]}
//
// https endpoints need the build to define CPPHTTPLIB_OPENSSL_SUPPORT.

#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "chronos/embedding.hpp"
#include "chronos/llm_gateway.hpp"

namespace chronos {

struct HttpOptions {
    std::string endpoint;  // full URL, e.g. http://localhost:8000/v1/chat/completions
    std::string model;
    std::string api_key_env = "CHRONOS_API_KEY";
    int timeout_s = 60;
    int attempts = 3;
    int backoff_ms = 500;
    int max_in_flight = 4;
};

namespace detail {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

inline SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw BackendError("endpoint '" + url + "' has no scheme");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// POSTs JSON, retrying connection failures, 429 and 5xx.
class JsonPoster {
public:
    explicit JsonPoster(HttpOptions options)
        : options_(std::move(options)), url_(split_url(options_.endpoint)),
          in_flight_(std::max(1, options_.max_in_flight)) {
        if (options_.attempts < 1) options_.attempts = 1;
    }

    nlohmann::json post(const nlohmann::json& body) const {
        in_flight_.acquire();
        struct Release {
            std::counting_semaphore<1024>& s;
            ~Release() { s.release(); }
        } release{in_flight_};

        httplib::Headers headers;
        if (!options_.api_key_env.empty()) {
            if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key) {
                headers.emplace("Authorization", std::string("Bearer ") + key);
            }
        }
        const std::string payload = body.dump();
        std::string last_error;
        for (int attempt = 0; attempt < options_.attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(options_.backoff_ms) * (1 << (attempt - 1)));
            }
            httplib::Client client(url_.origin);
            client.set_connection_timeout(options_.timeout_s, 0);
            client.set_read_timeout(options_.timeout_s, 0);
            client.set_write_timeout(options_.timeout_s, 0);
            auto res = client.Post(url_.path, headers, payload, "application/json");
            if (!res) {
                last_error = "request to " + options_.endpoint + " failed: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status) + " from " + options_.endpoint;
                continue;
            }
            if (res->status != 200) {
                throw BackendError("HTTP " + std::to_string(res->status) + " from " + options_.endpoint + ": " + res->body);
            }
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::parse_error& e) {
                throw BackendError(std::string("response is not JSON: ") + e.what());
            }
        }
        throw BackendError(last_error + " (after " + std::to_string(options_.attempts) + " attempts)");
    }

    const HttpOptions& options() const { return options_; }

private:
    HttpOptions options_;
    SplitUrl url_;
    mutable std::counting_semaphore<1024> in_flight_;
};

}  // namespace detail

class HttpChatBackend final : public LlmBackend {
public:
    explicit HttpChatBackend(HttpOptions options) : poster_(std::move(options)) {}

    std::string name() const override { return "http:" + poster_.options().model; }

    static nlohmann::json request_body(const std::string& model, const std::string& prompt) {
        return {{"model", model},
                {"temperature", 0},
                {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    }

    static Completion parse_response(const nlohmann::json& j) {
        Completion c;
        try {
            c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("unexpected chat response shape: ") + e.what());
        }
        if (j.contains("usage") && j["usage"].is_object()) {
            const auto& u = j["usage"];
            if (u.contains("prompt_tokens") && u["prompt_tokens"].is_number_integer()) c.prompt_tokens = u["prompt_tokens"].get<long>();
            if (u.contains("completion_tokens") && u["completion_tokens"].is_number_integer()) {
                c.completion_tokens = u["completion_tokens"].get<long>();
            }
        }
        return c;
    }

    Completion complete(const std::string& prompt) const override {
        return parse_response(poster_.post(request_body(poster_.options().model, prompt)));
    }

private:
    detail::JsonPoster poster_;
};

class RemoteEmbedder final : public EmbeddingProvider {
public:
    RemoteEmbedder(HttpOptions options, std::size_t dim) : poster_(std::move(options)), dim_(dim) {}

    std::string name() const override { return "remote:" + poster_.options().model; }
    std::size_t dim() const override { return dim_; }

    EmbeddingVector embed(std::string_view text) const override {
        std::vector<std::string> one{std::string(text)};
        return embed_batch(one).at(0);
    }

    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
        nlohmann::json body{{"model", poster_.options().model}, {"input", nlohmann::json::array()}};
        for (const auto& t : texts) body["input"].push_back(t);
        auto out = parse_response(poster_.post(body), texts.size());
        for (const auto& v : out) {
            if (v.dim() != dim_) {
                throw EmbeddingError("remote embedding has dim " + std::to_string(v.dim()) + ", configured " +
                                     std::to_string(dim_));
            }
        }
        return out;
    }

    static std::vector<EmbeddingVector> parse_response(const nlohmann::json& j, std::size_t expected) {
        std::vector<EmbeddingVector> out(expected);
        try {
            if (j.contains("data")) {
                const auto& data = j.at("data");
                for (std::size_t i = 0; i < data.size(); ++i) {
                    const std::size_t idx = data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
                    if (idx >= expected) throw EmbeddingError("embedding index out of range");
                    out[idx].values = data[i].at("embedding").get<std::vector<double>>();
                }
                if (data.size() != expected) throw EmbeddingError("embedding count mismatch");
            } else {
                const auto& arr = j.at("embeddings");
                if (arr.size() != expected) throw EmbeddingError("embedding count mismatch");
                for (std::size_t i = 0; i < expected; ++i) out[i].values = arr[i].get<std::vector<double>>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw EmbeddingError(std::string("unexpected embedding response shape: ") + e.what());
        }
        return out;
    }

private:
    detail::JsonPoster poster_;
    std::size_t dim_;
};

}  // namespace chronos
