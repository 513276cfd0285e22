#include "mcr/env.hpp"

#include "mcr/response_cache.hpp"

namespace mcr {

const char* to_string(Purpose p) {
    return p == Purpose::answer ? "answer" : "reward";
}

Environment::Environment(Backend& backend, RequestDefaults defaults, ResponseCache* cache)
    : backend_(backend), defaults_(std::move(defaults)), cache_(cache) {}

std::string Environment::complete(Purpose purpose, const std::string& prompt, std::uint64_t salt,
                                  int attempt) {
    CompletionRequest req;
    req.prompt = prompt;
    req.purpose = purpose;
    req.temperature = purpose == Purpose::reward ? defaults_.reward_temperature
                                                 : defaults_.answer_temperature;
    req.max_tokens = defaults_.max_tokens;
    req.model_id = defaults_.model_id;
    req.salt = salt;
    req.attempt = attempt;
    return complete(req);
}

std::string Environment::complete(const CompletionRequest& request) {
    (request.purpose == Purpose::answer ? answer_requests_ : reward_requests_) += 1;
    // Retry attempts skip the cache read: the point of a re-query is a fresh
    // reply, and the fresh one overwrites whatever was stored.
    if (cache_ && request.attempt == 0) {
        if (auto hit = cache_->get(request)) return *hit;
    }
    std::string reply = backend_.complete(request);
    ++backend_calls_;
    if (cache_) cache_->put(request, reply);
    return reply;
}

nlohmann::json Environment::fingerprint() const {
    nlohmann::json j = backend_.fingerprint();
    j["model_id"] = defaults_.model_id;
    j["answer_temperature"] = defaults_.answer_temperature;
    j["reward_temperature"] = defaults_.reward_temperature;
    j["max_tokens"] = defaults_.max_tokens;
    j["cache"] = cache_ != nullptr;
    return j;
}

} // namespace mcr
