#pragma once

#include "mcr/env.hpp"
#include "mcr/rate_limiter.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <string>

namespace mcr {

struct HttpConfig {
    std::string base_url = "https://api.openai.com";
    std::string completions_path = "/v1/completions";
    std::string api_key;               // usually from MCR_API_KEY / OPENAI_API_KEY
    int requests_per_minute = 60;      // 0 = unlimited
    int retry_cap = 5;                 // transient-failure retries per request
    int backoff_base_ms = 250;         // doubled per retry
    int backoff_cap_ms = 8000;
    int timeout_seconds = 60;
};

// Live backend speaking the OpenAI-compatible completions protocol:
// POST {base_url}{completions_path} with {"model","prompt","temperature",
// "max_tokens"}, reading choices[0].text back. Transient failures (connect
// errors, timeouts, 429, 5xx) retry with exponential backoff up to retry_cap;
// auth and malformed-body errors do not retry.
class HttpBackend final : public Backend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit HttpBackend(HttpConfig config, Sleeper sleeper = {});
    ~HttpBackend() override;

    std::string complete(const CompletionRequest& request) override;
    nlohmann::json fingerprint() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace mcr
