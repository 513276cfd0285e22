#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace mcr {

enum class Purpose { answer, reward };

const char* to_string(Purpose p);

struct CompletionRequest {
    std::string prompt;
    double temperature = 0.7;
    int max_tokens = 512;
    std::string model_id;
    Purpose purpose = Purpose::answer;
    // Distinguishes otherwise-identical requests (self-consistency trials).
    // Part of the cache key; stochastic live backends may ignore it.
    std::uint64_t salt = 0;
    // Retry ordinal for reward re-queries. attempt > 0 bypasses the cache
    // read so a stored unparseable reply cannot defeat the retry protocol.
    int attempt = 0;
};

// Text in, text out.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
    // Identifying summary embedded into run dumps (never includes secrets).
    virtual nlohmann::json fingerprint() const = 0;
};

struct RequestDefaults {
    double answer_temperature = 0.7;
    double reward_temperature = 0.0; // deterministic reward replies
    int max_tokens = 512;
    std::string model_id = "gpt-3.5-turbo-instruct";
};

class ResponseCache;

// Front door for all completions: applies per-purpose defaults, consults the
// cache when one is attached, and counts traffic for tests and reports.
class Environment {
public:
    explicit Environment(Backend& backend, RequestDefaults defaults = {},
                         ResponseCache* cache = nullptr);

    std::string complete(Purpose purpose, const std::string& prompt, std::uint64_t salt = 0,
                         int attempt = 0);
    std::string complete(const CompletionRequest& request);

    const RequestDefaults& defaults() const { return defaults_; }
    nlohmann::json fingerprint() const;

    // Requests issued through this environment, by purpose.
    std::uint64_t answer_requests() const { return answer_requests_; }
    std::uint64_t reward_requests() const { return reward_requests_; }
    // Requests that actually reached the backend (cache misses + bypasses).
    std::uint64_t backend_calls() const { return backend_calls_; }

private:
    Backend& backend_;
    RequestDefaults defaults_;
    ResponseCache* cache_;
    std::uint64_t answer_requests_ = 0;
    std::uint64_t reward_requests_ = 0;
    std::uint64_t backend_calls_ = 0;
};

} // namespace mcr
