#pragma once

#include <stdexcept>
#include <string>

namespace mcr {

// Base for every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// prompt-state
struct illegal_action : error {
    using error::error;
};

// search-tree
struct unknown_parent : error {
    using error::error;
};
struct unknown_node : error {
    using error::error;
};
struct duplicate_edge : error {
    using error::error;
};
struct empty_tree : error {
    using error::error;
};
struct malformed_document : error {
    malformed_document(const std::string& location, const std::string& what)
        : error("malformed document at " + location + ": " + what), location(location) {}
    std::string location;
};

// reward
struct empty_candidate_list : error {
    using error::error;
};
struct parse_failure : error {
    using error::error;
};
struct no_candidates_found : error {
    using error::error;
};
struct reward_unavailable : error {
    using error::error;
};

// llm-env
struct environment_failure : error {
    using error::error;
};
struct transport_error : environment_failure {
    using environment_failure::environment_failure;
};
struct rate_limited : environment_failure {
    using environment_failure::environment_failure;
};
struct auth_failure : environment_failure {
    using environment_failure::environment_failure;
};
struct malformed_response : environment_failure {
    using environment_failure::environment_failure;
};
struct cache_corrupt : error {
    using error::error;
};

// cli-runner
struct schema_error : error {
    schema_error(const std::string& what, int line = 0) : error(what), line(line) {}
    int line; // 1-based line number when known, 0 otherwise
};
struct duplicate_id : error {
    using error::error;
};
struct version_error : error {
    using error::error;
};
struct empty_run_dir : error {
    using error::error;
};

} // namespace mcr
