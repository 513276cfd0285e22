#pragma once

// Shared helpers for the test binaries.

#include "mcr/env.hpp"
#include "mcr/prompt_state.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace mcr::test {

inline std::filesystem::path source_dir() {
    return std::filesystem::path(MCR_SOURCE_DIR);
}

inline std::filesystem::path fixture_path(const std::string& name) {
    return source_dir() / "tests" / "fixtures" / name;
}

inline nlohmann::json load_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               ("mcr_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// Replays a fixed list of replies, then keeps returning the last one.
class ScriptedBackend final : public Backend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}

    std::string complete(const CompletionRequest&) override {
        std::size_t i = next_ < replies_.size() ? next_ : replies_.size() - 1;
        ++next_;
        return replies_[i];
    }
    nlohmann::json fingerprint() const override {
        return nlohmann::json{{"kind", "scripted"}};
    }
    std::size_t calls() const { return next_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

inline RootQuery oc_query(const std::string& adsorbate = "*OH", int k = 5) {
    RootQuery q;
    q.kind = QueryKind::open_catalysis;
    q.adsorbate = adsorbate;
    q.top_k = k;
    return q;
}

inline RootQuery bqr_query(const std::string& id = "bqr-001", int k = 3) {
    RootQuery q;
    q.kind = QueryKind::biofuel_qr;
    q.question_id = id;
    q.top_k = k;
    return q;
}

} // namespace mcr::test
