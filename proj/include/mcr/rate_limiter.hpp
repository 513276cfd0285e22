#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>

namespace mcr {

// Shared requests-per-minute limiter (sliding window). Clock and sleep are
// injectable so tests can drive it with fake time.
class RateLimiter {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit RateLimiter(int requests_per_minute, Clock clock = {}, Sleeper sleeper = {});

    // Blocks (via the sleeper) until issuing one more request stays within
    // the configured rate. No-op when the limit is 0 (unlimited).
    void acquire();

    int limit() const { return requests_per_minute_; }

private:
    int requests_per_minute_;
    Clock clock_;
    Sleeper sleeper_;
    std::deque<std::chrono::steady_clock::time_point> issued_;
    std::mutex mutex_;
};

} // namespace mcr
