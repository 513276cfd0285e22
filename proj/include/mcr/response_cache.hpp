#pragma once

#include "mcr/env.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace mcr {

// Persistent completion cache: an append-only JSONL journal, replayed on
// open (last entry wins). A corrupt journal is truncated and rebuilt with a
// warning instead of failing the run. Keyed on request content — model,
// temperature, max_tokens, salt and prompt — never on purpose.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path path);

    static std::string key_of(const CompletionRequest& request);

    std::optional<std::string> get(const CompletionRequest& request);
    void put(const CompletionRequest& request, const std::string& reply);

    std::size_t size() const;
    const std::filesystem::path& path() const { return path_; }
    // Non-empty after a corrupt journal was detected on open.
    const std::string& corruption_note() const { return corruption_note_; }

private:
    struct Entry {
        std::string prompt; // full request echo guards against hash collisions
        std::string reply;
    };

    void load();

    std::filesystem::path path_;
    std::map<std::string, Entry> entries_;
    std::ofstream journal_;
    std::string corruption_note_;
    mutable std::mutex mutex_;
};

} // namespace mcr
