#include "mcr/rate_limiter.hpp"

#include <thread>

namespace mcr {

RateLimiter::RateLimiter(int requests_per_minute, Clock clock, Sleeper sleeper)
    : requests_per_minute_(requests_per_minute),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      sleeper_(sleeper ? std::move(sleeper)
                       : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

void RateLimiter::acquire() {
    using namespace std::chrono;
    if (requests_per_minute_ <= 0) return;
    std::unique_lock lock(mutex_);
    for (;;) {
        auto now = clock_();
        while (!issued_.empty() && now - issued_.front() >= minutes(1)) issued_.pop_front();
        if (static_cast<int>(issued_.size()) < requests_per_minute_) {
            issued_.push_back(now);
            return;
        }
        auto wait = duration_cast<milliseconds>(issued_.front() + minutes(1) - now);
        if (wait < milliseconds(1)) wait = milliseconds(1);
        lock.unlock();
        sleeper_(wait);
        lock.lock();
    }
}

} // namespace mcr
