#include "mcr/runner.hpp"

#include "mcr/errors.hpp"
#include "mcr/response_cache.hpp"
#include "mcr/util.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace mcr {

using nlohmann::json;

namespace {

std::string sanitize_for_filename(const std::string& id) {
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

json entry_to_json(const DatasetEntry& entry) {
    json j{{"id", entry.id},
           {"kind", to_string(entry.kind)},
           {"adsorbates", entry.adsorbates},
           {"k", entry.top_k}};
    j["question"] = entry.question_text ? json(*entry.question_text) : json(nullptr);
    return j;
}

bool is_completed_dump(const std::filesystem::path& path, const std::string& method) {
    std::ifstream in(path);
    if (!in) return false;
    try {
        json j = json::parse(in);
        return j.value("schema_version", -1) == kDumpSchemaVersion &&
               j.value("kind", "") == "run_dump" && j.value("method", "") == method &&
               j.value("completed", false);
    } catch (const json::exception&) {
        return false;
    }
}

struct MethodOutcome {
    RunResult result;
    bool ok = false;
    std::string error_text;
};

} // namespace

std::filesystem::path dump_path(const std::filesystem::path& out_dir, const std::string& method,
                                const std::string& entry_id) {
    return out_dir / (method + "_" + sanitize_for_filename(entry_id) + ".json");
}

json metrics_to_json(const RunMetrics& m) {
    return json{{"best_reward", format_double17(m.best_reward)},
                {"prompts_evaluated", m.prompts_evaluated},
                {"max_depth", m.max_depth},
                {"depth_guard_hits", m.depth_guard_hits}};
}

RunMetrics metrics_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw malformed_document(where, "metrics must be an object");
    RunMetrics m;
    try {
        m.best_reward = parse_double17(j.at("best_reward").get<std::string>());
        m.prompts_evaluated = j.at("prompts_evaluated").get<int>();
        m.max_depth = j.at("max_depth").get<int>();
        m.depth_guard_hits = j.value("depth_guard_hits", 0);
    } catch (const std::exception& e) {
        throw malformed_document(where, e.what());
    }
    return m;
}

int run_entries(const RunnerOptions& options, std::ostream& log) {
    static const char* kMethods[] = {"mcr", "cot", "sc", "tot"};
    if (std::find(std::begin(kMethods), std::end(kMethods), options.method) == std::end(kMethods))
        throw error("unknown method '" + options.method + "' (expected mcr|cot|sc|tot)");

    const ActionTable table =
        options.actions_config ? ActionTable::load(*options.actions_config) : ActionTable::defaults();
    const std::vector<DatasetEntry> entries = load_dataset(options.dataset);
    std::filesystem::create_directories(options.out_dir);

    std::unique_ptr<Backend> backend;
    if (options.backend_kind == "mock") {
        backend = std::make_unique<MockBackend>(options.mock);
    } else if (options.backend_kind == "http") {
        backend = std::make_unique<HttpBackend>(options.http);
    } else {
        throw error("unknown backend '" + options.backend_kind + "' (expected mock|http)");
    }
    std::unique_ptr<ResponseCache> cache;
    if (options.cache_path) {
        cache = std::make_unique<ResponseCache>(*options.cache_path);
        if (!cache->corruption_note().empty())
            log << "warning: " << cache->corruption_note() << "\n";
    }
    Environment env(*backend, options.request_defaults, cache.get());

    int failures = 0;
    for (const DatasetEntry& entry : entries) {
        const std::filesystem::path path = dump_path(options.out_dir, options.method, entry.id);
        if (!options.force && is_completed_dump(path, options.method)) {
            log << "skip " << entry.id << " (completed dump exists)\n";
            continue;
        }

        SearchConfig cfg = options.search;
        cfg.seed = hash_mix(options.search.seed, fnv1a64(entry.id));
        cfg.top_k = entry.top_k;
        const RootQuery query = entry.to_query();

        SearchTree tree;
        MethodOutcome outcome;
        try {
            if (options.method == "mcr") {
                McrEngine engine(table, env, cfg);
                outcome.result = engine.run(tree, query);
            } else if (options.method == "cot") {
                outcome.result = run_cot(tree, env, query);
            } else if (options.method == "sc") {
                outcome.result = run_self_consistency(tree, env, query, options.sc_trials);
            } else {
                outcome.result = run_tot_bfs(tree, table, env, query, options.tot);
            }
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.error_text = e.what();
        }

        json dump{{"schema_version", kDumpSchemaVersion},
                  {"kind", "run_dump"},
                  {"method", options.method},
                  {"entry", entry_to_json(entry)},
                  {"completed", outcome.ok},
                  {"backend", env.fingerprint()}};
        dump["error"] = outcome.ok ? json(nullptr) : json(outcome.error_text);
        json config{{"method", options.method},
                    {"search", cfg.to_json()},
                    {"sc_trials", options.sc_trials},
                    {"tot", json{{"branching", options.tot.branching},
                                 {"action_cap", options.tot.action_cap},
                                 {"depth", options.tot.depth}}},
                    {"request_defaults", json{{"model_id", options.request_defaults.model_id},
                                              {"answer_temperature",
                                               options.request_defaults.answer_temperature},
                                              {"reward_temperature",
                                               options.request_defaults.reward_temperature},
                                              {"max_tokens", options.request_defaults.max_tokens}}},
                    {"actions", json{{"include_properties", table.include_properties().size()},
                                     {"exclude_properties", table.exclude_properties().size()},
                                     {"catalyst_types", table.catalyst_types().size()}}}};
        dump["config"] = std::move(config);
        if (outcome.ok) {
            dump["metrics"] = metrics_to_json(outcome.result.metrics);
            dump["best_node"] = outcome.result.best_node;
            dump["detail"] = outcome.result.detail;
        } else {
            dump["metrics"] = json(nullptr);
            dump["best_node"] = json(nullptr);
            dump["detail"] = json::object();
        }
        // A partial tree is still worth keeping when a run aborts midway.
        dump["tree"] = tree.empty() ? json(nullptr) : tree.to_json();
        write_file_atomic(path, dump.dump(2) + "\n");

        if (outcome.ok) {
            const RunMetrics& m = outcome.result.metrics;
            log << options.method << " " << entry.id << ": reward "
                << format_double17(m.best_reward) << ", prompts " << m.prompts_evaluated
                << ", max depth " << m.max_depth << "\n";
        } else {
            ++failures;
            log << options.method << " " << entry.id << " FAILED: " << outcome.error_text << "\n";
        }
    }
    return failures;
}

json load_dump(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw error("cannot open dump " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw malformed_document(file.string(), e.what());
    }
    if (!j.is_object() || j.value("kind", "") != "run_dump")
        throw malformed_document(file.string(), "not a run dump");
    if (j.value("schema_version", -1) != kDumpSchemaVersion)
        throw version_error("unsupported dump schema_version in " + file.string());
    return j;
}

json build_report(const std::filesystem::path& run_dir) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(run_dir)) {
        for (const auto& e : std::filesystem::directory_iterator(run_dir))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw empty_run_dir("no dumps found in " + run_dir.string());

    struct Row {
        int completed = 0;
        int failed = 0;
        double reward_sum = 0;
        double prompts_sum = 0;
        double depth_sum = 0;
    };
    std::map<std::string, Row> rows;
    json per_entry = json::array();
    for (const auto& file : files) {
        json dump = load_dump(file);
        const std::string method = dump.value("method", "?");
        Row& row = rows[method];
        json detail{{"method", method},
                    {"entry", dump["entry"].value("id", "?")},
                    {"file", file.filename().string()},
                    {"completed", dump.value("completed", false)}};
        if (dump.value("completed", false)) {
            RunMetrics m = metrics_from_json(dump["metrics"], file.string() + "#metrics");
            ++row.completed;
            row.reward_sum += m.best_reward;
            row.prompts_sum += m.prompts_evaluated;
            row.depth_sum += m.max_depth;
            detail["reward"] = format_double17(m.best_reward);
            detail["prompts"] = m.prompts_evaluated;
            detail["max_depth"] = m.max_depth;
        } else {
            ++row.failed;
            detail["error"] = dump.value("error", json(nullptr));
        }
        per_entry.push_back(std::move(detail));
    }

    json methods = json::array();
    for (const auto& [method, row] : rows) {
        json r{{"method", method}, {"entries", row.completed}, {"failed", row.failed}};
        if (row.completed > 0) {
            r["mean_reward"] = row.reward_sum / row.completed;
            r["mean_prompts"] = row.prompts_sum / row.completed;
            // Single-prompt methods have no tree depth to report.
            if (method == "cot" || method == "sc") r["mean_max_depth"] = json(nullptr);
            else r["mean_max_depth"] = row.depth_sum / row.completed;
        } else {
            r["mean_reward"] = json(nullptr);
            r["mean_prompts"] = json(nullptr);
            r["mean_max_depth"] = json(nullptr);
        }
        methods.push_back(std::move(r));
    }
    return json{{"schema_version", kDumpSchemaVersion},
                {"run_dir", run_dir.string()},
                {"methods", methods},
                {"entries", per_entry}};
}

std::string format_report_table(const json& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %8s %8s %14s %14s %16s\n", "method", "entries",
                  "failed", "mean reward", "mean prompts", "mean max depth");
    out << line;
    for (const auto& r : report.at("methods")) {
        std::string reward = "-", prompts = "-", depth = "-";
        if (!r.at("mean_reward").is_null()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", r.at("mean_reward").get<double>());
            reward = buf;
            std::snprintf(buf, sizeof buf, "%.2f", r.at("mean_prompts").get<double>());
            prompts = buf;
        }
        if (!r.at("mean_max_depth").is_null()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", r.at("mean_max_depth").get<double>());
            depth = buf;
        }
        std::snprintf(line, sizeof line, "%-8s %8d %8d %14s %14s %16s\n",
                      r.at("method").get<std::string>().c_str(), r.at("entries").get<int>(),
                      r.at("failed").get<int>(), reward.c_str(), prompts.c_str(), depth.c_str());
        out << line;
    }
    return out.str();
}

} // namespace mcr
