// mcr: prompt-search runs over catalyst datasets, reports, and tree dumps.

#include "mcr/errors.hpp"
#include "mcr/runner.hpp"
#include "mcr/search_tree.hpp"
#include "mcr/util.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

std::string api_key_from_env() {
    if (const char* key = std::getenv("MCR_API_KEY")) return key;
    if (const char* key = std::getenv("OPENAI_API_KEY")) return key;
    return "";
}

// Overlays config-file values onto the built-in defaults. CLI flags that were
// given explicitly are applied afterwards by the caller.
void apply_config_file(mcr::RunnerOptions& opt, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw mcr::error("cannot open config file: " + path.string());
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw mcr::error("config file is not valid JSON: " + std::string(e.what()));
    }
    if (cfg.contains("search")) {
        const json& s = cfg["search"];
        opt.search.gamma = s.value("gamma", opt.search.gamma);
        opt.search.exploration_c = s.value("c", opt.search.exploration_c);
        opt.search.budget = s.value("budget", opt.search.budget);
        opt.search.seed = s.value("seed", opt.search.seed);
        opt.search.max_depth_guard = s.value("max_depth_guard", opt.search.max_depth_guard);
    }
    if (cfg.contains("self_consistency"))
        opt.sc_trials = cfg["self_consistency"].value("trials", opt.sc_trials);
    if (cfg.contains("tot")) {
        const json& t = cfg["tot"];
        opt.tot.branching = t.value("branching", opt.tot.branching);
        opt.tot.action_cap = t.value("action_cap", opt.tot.action_cap);
        opt.tot.depth = t.value("depth", opt.tot.depth);
    }
    if (cfg.contains("backend")) opt.backend_kind = cfg["backend"].value("kind", opt.backend_kind);
    if (cfg.contains("mock")) {
        const json& m = cfg["mock"];
        opt.mock.seed = m.value("seed", opt.mock.seed);
        if (m.contains("landscape"))
            opt.mock.landscape = mcr::mock_landscape_from_string(m["landscape"].get<std::string>());
        opt.mock.noise = m.value("noise", opt.mock.noise);
        opt.mock.base_magnitude = m.value("base_magnitude", opt.mock.base_magnitude);
        opt.mock.tier_bonus = m.value("tier_bonus", opt.mock.tier_bonus);
        opt.mock.target_subset_size = m.value("target_subset_size", opt.mock.target_subset_size);
        if (m.contains("catalyst_vocabulary"))
            opt.mock.catalyst_vocabulary = m["catalyst_vocabulary"].get<std::vector<std::string>>();
    }
    if (cfg.contains("http")) {
        const json& h = cfg["http"];
        opt.http.base_url = h.value("base_url", opt.http.base_url);
        opt.http.completions_path = h.value("completions_path", opt.http.completions_path);
        opt.http.requests_per_minute = h.value("rpm_limit", opt.http.requests_per_minute);
        opt.http.retry_cap = h.value("retry_cap", opt.http.retry_cap);
        opt.http.backoff_base_ms = h.value("backoff_base_ms", opt.http.backoff_base_ms);
        opt.http.timeout_seconds = h.value("timeout_seconds", opt.http.timeout_seconds);
    }
    if (cfg.contains("request_defaults")) {
        const json& r = cfg["request_defaults"];
        opt.request_defaults.model_id = r.value("model_id", opt.request_defaults.model_id);
        opt.request_defaults.answer_temperature =
            r.value("answer_temperature", opt.request_defaults.answer_temperature);
        opt.request_defaults.reward_temperature =
            r.value("reward_temperature", opt.request_defaults.reward_temperature);
        opt.request_defaults.max_tokens = r.value("max_tokens", opt.request_defaults.max_tokens);
    }
    if (cfg.contains("cache_path") && cfg["cache_path"].is_string())
        opt.cache_path = std::filesystem::path(cfg["cache_path"].get<std::string>());
    if (cfg.contains("actions_config") && cfg["actions_config"].is_string())
        opt.actions_config = std::filesystem::path(cfg["actions_config"].get<std::string>());
}

int cmd_dump_tree(const std::filesystem::path& run_dir, const std::string& entry_id,
                  const std::string& method, const std::string& format) {
    std::vector<std::filesystem::path> matches;
    for (const auto& e : std::filesystem::directory_iterator(run_dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        try {
            json dump = mcr::load_dump(e.path());
            if (dump["entry"].value("id", "") != entry_id) continue;
            if (!method.empty() && dump.value("method", "") != method) continue;
            matches.push_back(e.path());
        } catch (const mcr::error&) {
            continue; // not a dump; ignore
        }
    }
    if (matches.empty()) {
        std::cerr << "no dump for entry '" << entry_id << "' in " << run_dir << "\n";
        return 1;
    }
    if (matches.size() > 1) {
        std::cerr << "entry '" << entry_id << "' is ambiguous; pass --method. Candidates:\n";
        for (const auto& m : matches) std::cerr << "  " << m << "\n";
        return 1;
    }
    json dump = mcr::load_dump(matches.front());
    if (dump["tree"].is_null()) {
        std::cerr << "dump has no tree\n";
        return 1;
    }
    if (format == "json") {
        std::cout << dump["tree"].dump(2) << "\n";
    } else {
        mcr::SearchTree tree = mcr::SearchTree::from_json(dump["tree"]);
        std::cout << tree.to_dot();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo prompt search over catalyst discovery queries"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "run a search method over a dataset");
    mcr::RunnerOptions opt;
    std::string config_path;
    std::string cache_flag;
    std::string actions_flag;
    run->add_option("--method", opt.method, "mcr | cot | sc | tot")->required();
    run->add_option("--dataset", opt.dataset, "dataset file (JSONL)")->required();
    run->add_option("--out", opt.out_dir, "output directory for dumps")->required();
    auto* backend_opt = run->add_option("--backend", opt.backend_kind, "mock | http");
    run->add_option("--config", config_path, "JSON config file");
    auto* seed_opt = run->add_option("--seed", opt.search.seed, "engine and mock seed");
    auto* budget_opt = run->add_option("--budget", opt.search.budget, "simulations after the root");
    auto* gamma_opt = run->add_option("--gamma", opt.search.gamma, "discount factor");
    auto* c_opt = run->add_option("--c", opt.search.exploration_c, "exploration constant");
    auto* guard_opt =
        run->add_option("--max-depth-guard", opt.search.max_depth_guard, "expansion depth cap");
    auto* trials_opt = run->add_option("--trials", opt.sc_trials, "self-consistency trials");
    auto* branching_opt = run->add_option("--branching", opt.tot.branching, "tot nodes per level");
    auto* cap_opt = run->add_option("--action-cap", opt.tot.action_cap, "tot actions per node");
    auto* depth_opt = run->add_option("--tot-depth", opt.tot.depth, "tot depth");
    run->add_option("--cache", cache_flag, "response cache file (JSONL journal)");
    run->add_option("--actions", actions_flag, "actions/vocabulary config file");
    run->add_flag("--force", opt.force, "re-run entries with existing dumps");

    // --- report ---
    auto* report = app.add_subcommand("report", "aggregate dumps into a results table");
    std::string report_dir;
    std::string report_format = "table";
    report->add_option("--run", report_dir, "run directory")->required();
    report->add_option("--format", report_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));

    // --- dump-tree ---
    auto* dump_tree = app.add_subcommand("dump-tree", "print one entry's search tree");
    std::string dt_dir, dt_entry, dt_method;
    std::string dt_format = "json";
    dump_tree->add_option("--run", dt_dir, "run directory")->required();
    dump_tree->add_option("--entry", dt_entry, "dataset entry id")->required();
    dump_tree->add_option("--method", dt_method, "disambiguate when several methods ran");
    dump_tree->add_option("--format", dt_format, "json | dot")
        ->check(CLI::IsMember({"json", "dot"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            // Precedence: CLI flags > config file > defaults. Remember which
            // flags were given, load the file, then re-apply the flags.
            mcr::RunnerOptions given = opt;
            if (!config_path.empty()) apply_config_file(opt, config_path);
            if (backend_opt->count()) opt.backend_kind = given.backend_kind;
            if (seed_opt->count()) opt.search.seed = given.search.seed;
            if (budget_opt->count()) opt.search.budget = given.search.budget;
            if (gamma_opt->count()) opt.search.gamma = given.search.gamma;
            if (c_opt->count()) opt.search.exploration_c = given.search.exploration_c;
            if (guard_opt->count()) opt.search.max_depth_guard = given.search.max_depth_guard;
            if (trials_opt->count()) opt.sc_trials = given.sc_trials;
            if (branching_opt->count()) opt.tot.branching = given.tot.branching;
            if (cap_opt->count()) opt.tot.action_cap = given.tot.action_cap;
            if (depth_opt->count()) opt.tot.depth = given.tot.depth;
            if (!cache_flag.empty()) opt.cache_path = std::filesystem::path(cache_flag);
            if (!actions_flag.empty()) opt.actions_config = std::filesystem::path(actions_flag);
            // Keep the engine seed and the mock's reply stream on one knob
            // unless the config file pinned the mock seed separately.
            if (seed_opt->count() || opt.mock.seed == 0) opt.mock.seed = opt.search.seed;
            opt.http.api_key = api_key_from_env();
            if (opt.backend_kind == "http" && opt.http.api_key.empty())
                std::cerr << "warning: no MCR_API_KEY / OPENAI_API_KEY in the environment\n";

            int failures = mcr::run_entries(opt, std::cerr);
            if (failures) {
                std::cerr << failures << " entr" << (failures == 1 ? "y" : "ies") << " failed\n";
                return 1;
            }
            return 0;
        }
        if (report->parsed()) {
            nlohmann::json rep = mcr::build_report(report_dir);
            if (report_format == "json") std::cout << rep.dump(2) << "\n";
            else std::cout << mcr::format_report_table(rep);
            return 0;
        }
        if (dump_tree->parsed()) return cmd_dump_tree(dt_dir, dt_entry, dt_method, dt_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
