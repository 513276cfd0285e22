#pragma once

#include "mcr/baselines.hpp"
#include "mcr/dataset.hpp"
#include "mcr/http_backend.hpp"
#include "mcr/mcts.hpp"
#include "mcr/mock_backend.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mcr {

inline constexpr int kDumpSchemaVersion = 1;

struct RunnerOptions {
    std::string method; // mcr | cot | sc | tot
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    std::string backend_kind = "mock"; // mock | http
    MockProfile mock;
    HttpConfig http;
    RequestDefaults request_defaults;
    SearchConfig search;
    ToTConfig tot;
    int sc_trials = 10;
    std::optional<std::filesystem::path> cache_path;
    std::optional<std::filesystem::path> actions_config;
    bool force = false;
};

// Runs `method` over every dataset entry, writing one dump per entry into
// out_dir (write-to-temp then rename). Entries with a completed dump are
// skipped unless force is set; per-entry failures are recorded (with any
// partial tree) and the run continues. Returns the number of failed entries.
int run_entries(const RunnerOptions& options, std::ostream& log);

std::filesystem::path dump_path(const std::filesystem::path& out_dir, const std::string& method,
                                const std::string& entry_id);

// Loads one dump, validating its schema version (throws version_error naming
// the file) and basic shape (malformed_document).
nlohmann::json load_dump(const std::filesystem::path& file);

nlohmann::json metrics_to_json(const RunMetrics& m);
RunMetrics metrics_from_json(const nlohmann::json& j, const std::string& where);

// Aggregates every dump in a run directory into per-method mean rows plus
// per-entry detail. Pure function of the dump files. Throws empty_run_dir.
nlohmann::json build_report(const std::filesystem::path& run_dir);
std::string format_report_table(const nlohmann::json& report);

} // namespace mcr
