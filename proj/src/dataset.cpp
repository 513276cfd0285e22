#include "mcr/dataset.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace mcr {

using nlohmann::json;

RootQuery DatasetEntry::to_query() const {
    RootQuery q;
    q.kind = kind;
    q.top_k = top_k;
    if (kind == QueryKind::open_catalysis)
        q.adsorbate = adsorbates.empty() ? std::string() : adsorbates.front();
    else
        q.question_id = id;
    return q;
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open dataset: " + path.string());

    std::vector<DatasetEntry> entries;
    std::set<std::string> seen_ids;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw schema_error("line " + std::to_string(lineno) + ": invalid JSON: " + e.what(),
                               lineno);
        }
        if (!j.is_object())
            throw schema_error("line " + std::to_string(lineno) + ": expected an object", lineno);

        DatasetEntry entry;
        if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
            throw schema_error("line " + std::to_string(lineno) + ": missing string field 'id'",
                               lineno);
        entry.id = j["id"].get<std::string>();
        if (!seen_ids.insert(entry.id).second)
            throw duplicate_id("duplicate dataset id '" + entry.id + "' at line " +
                               std::to_string(lineno));

        if (!j.contains("kind") || !j["kind"].is_string())
            throw schema_error("line " + std::to_string(lineno) + ": missing string field 'kind'",
                               lineno);
        try {
            entry.kind = query_kind_from_string(j["kind"].get<std::string>());
        } catch (const error& e) {
            throw schema_error("line " + std::to_string(lineno) + ": " + e.what(), lineno);
        }

        if (entry.kind == QueryKind::open_catalysis) {
            if (!j.contains("adsorbate") || !j["adsorbate"].is_string() ||
                j["adsorbate"].get<std::string>().empty())
                throw schema_error("line " + std::to_string(lineno) +
                                       ": open_catalysis entries need an 'adsorbate'",
                                   lineno);
            entry.adsorbates = {j["adsorbate"].get<std::string>()};
            entry.top_k = 5;
        } else {
            entry.adsorbates = {"CO2", "H2"};
            entry.top_k = 3;
        }
        if (j.contains("question")) {
            if (!j["question"].is_string())
                throw schema_error("line " + std::to_string(lineno) + ": 'question' must be a string",
                                   lineno);
            entry.question_text = j["question"].get<std::string>();
        }
        if (j.contains("k")) {
            if (!j["k"].is_number_integer() || j["k"].get<int>() < 1)
                throw schema_error("line " + std::to_string(lineno) +
                                       ": 'k' must be a positive integer",
                                   lineno);
            entry.top_k = j["k"].get<int>();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace mcr
