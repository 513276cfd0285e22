#include "mcr/response_cache.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <json.hpp>

namespace mcr {

using nlohmann::json;

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    load();
    journal_.open(path_, std::ios::app);
    if (!journal_) throw error("cannot open cache journal for writing: " + path_.string());
}

std::string ResponseCache::key_of(const CompletionRequest& request) {
    std::uint64_t h = fnv1a64(request.model_id);
    h = fnv1a64(format_double17(request.temperature), h);
    h = fnv1a64(std::to_string(request.max_tokens), h);
    h = fnv1a64(std::to_string(request.salt), h);
    h = fnv1a64(request.prompt, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ResponseCache::load() {
    std::ifstream in(path_);
    if (!in) return; // fresh cache
    std::map<std::string, Entry> loaded;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            std::string key = j.at("key").get<std::string>();
            Entry e{j.at("prompt").get<std::string>(), j.at("reply").get<std::string>()};
            loaded[std::move(key)] = std::move(e);
        } catch (const json::exception&) {
            // Rebuild-on-error policy: keep what replayed cleanly, truncate
            // the journal, and surface a warning to the caller.
            corruption_note_ = "cache journal corrupt at line " + std::to_string(lineno) +
                               "; rebuilding " + path_.string();
            std::ofstream rebuild(path_, std::ios::trunc);
            for (const auto& [key, e] : loaded) {
                rebuild << json{{"key", key}, {"prompt", e.prompt}, {"reply", e.reply}}.dump()
                        << '\n';
            }
            break;
        }
    }
    entries_ = std::move(loaded);
}

std::optional<std::string> ResponseCache::get(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key_of(request));
    if (it == entries_.end()) return std::nullopt;
    if (it->second.prompt != request.prompt) return std::nullopt; // hash collision
    return it->second.reply;
}

void ResponseCache::put(const CompletionRequest& request, const std::string& reply) {
    std::lock_guard lock(mutex_);
    std::string key = key_of(request);
    entries_[key] = Entry{request.prompt, reply};
    journal_ << json{{"key", key}, {"prompt", request.prompt}, {"reply", reply}}.dump() << '\n';
    journal_.flush();
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

} // namespace mcr
