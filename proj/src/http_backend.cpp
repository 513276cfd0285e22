#include "mcr/http_backend.hpp"

#include "mcr/errors.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace mcr {

using nlohmann::json;

namespace {

// httplib::Client wants scheme://host[:port] and the path separately.
std::pair<std::string, std::string> split_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = base_url.find('/', host_start);
    if (path_start == std::string::npos) return {base_url, ""};
    return {base_url.substr(0, path_start), base_url.substr(path_start)};
}

} // namespace

struct HttpBackend::Impl {
    HttpConfig config;
    std::string host;
    std::string path_prefix;
    httplib::Client client;
    RateLimiter limiter;
    Sleeper sleeper;

    Impl(HttpConfig cfg, Sleeper sleep_fn)
        : config(std::move(cfg)),
          host(split_url(config.base_url).first),
          path_prefix(split_url(config.base_url).second),
          client(host),
          limiter(config.requests_per_minute),
          sleeper(sleep_fn ? std::move(sleep_fn) : [](std::chrono::milliseconds d) {
              std::this_thread::sleep_for(d);
          }) {
        client.set_connection_timeout(config.timeout_seconds);
        client.set_read_timeout(config.timeout_seconds);
        client.set_write_timeout(config.timeout_seconds);
        if (!config.api_key.empty()) client.set_bearer_token_auth(config.api_key);
    }

    void backoff(int attempt) {
        int ms = config.backoff_base_ms;
        for (int i = 0; i < attempt && ms < config.backoff_cap_ms; ++i) ms *= 2;
        sleeper(std::chrono::milliseconds(std::min(ms, config.backoff_cap_ms)));
    }
};

HttpBackend::HttpBackend(HttpConfig config, Sleeper sleeper)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(sleeper))) {}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::complete(const CompletionRequest& request) {
    const json body{{"model", request.model_id},
                    {"prompt", request.prompt},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_tokens}};
    const std::string payload = body.dump();
    const std::string path = impl_->path_prefix + impl_->config.completions_path;

    std::string last_error = "no attempt made";
    bool saw_rate_limit = false;
    for (int attempt = 0; attempt <= impl_->config.retry_cap; ++attempt) {
        if (attempt > 0) impl_->backoff(attempt - 1);
        impl_->limiter.acquire();
        httplib::Result res = impl_->client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue; // connect errors and timeouts are transient
        }
        if (res->status == 401 || res->status == 403)
            throw auth_failure("authentication rejected (HTTP " + std::to_string(res->status) +
                               ") by " + impl_->host);
        if (res->status == 429) {
            saw_rate_limit = true;
            last_error = "HTTP 429";
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw transport_error("unexpected HTTP " + std::to_string(res->status) + " from " +
                                  impl_->host + ": " + res->body.substr(0, 200));
        try {
            json reply = json::parse(res->body);
            const json& choices = reply.at("choices");
            if (!choices.is_array() || choices.empty())
                throw malformed_response("completion response has no choices");
            return choices[0].at("text").get<std::string>();
        } catch (const json::exception& e) {
            throw malformed_response(std::string("cannot parse completion response: ") + e.what());
        }
    }
    if (saw_rate_limit)
        throw rate_limited("rate limited after " + std::to_string(impl_->config.retry_cap + 1) +
                           " attempts (" + last_error + ")");
    throw transport_error("request failed after " + std::to_string(impl_->config.retry_cap + 1) +
                          " attempts (" + last_error + ")");
}

nlohmann::json HttpBackend::fingerprint() const {
    return nlohmann::json{{"kind", "http"},
                          {"base_url", impl_->config.base_url},
                          {"completions_path", impl_->config.completions_path},
                          {"requests_per_minute", impl_->config.requests_per_minute},
                          {"retry_cap", impl_->config.retry_cap}};
}

} // namespace mcr
