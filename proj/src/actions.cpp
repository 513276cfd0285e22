#include "mcr/actions.hpp"

#include "mcr/errors.hpp"

#include <fstream>

#include <json.hpp>

namespace mcr {

namespace {

const std::vector<std::string> kDefaultIncludeProps = {
    "high activity",  "high selectivity", "high stability",   "novelty",
    "low cost",       "low toxicity",     "high surface area", "high porosity",
    "crystal facet",  "availability",
};

const std::vector<std::string> kDefaultExcludeProps = {
    "low activity", "low selectivity", "low stability",  "high cost",
    "high toxicity", "low dispersion", "low porosity",   "high scarcity",
};

const std::vector<std::string> kDefaultCatalystTypes = {
    "unary catalyst",
    "binary catalyst",
    "trinary catalyst",
    "catalyst",
};

} // namespace

const char* to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::add_include: return "add_include";
        case ActionKind::add_exclude: return "add_exclude";
        case ActionKind::change_catalyst_type: return "change_catalyst_type";
        case ActionKind::toggle_oxide: return "toggle_oxide";
        case ActionKind::change_relation: return "change_relation";
        case ActionKind::repeat_prompt: return "repeat_prompt";
    }
    return "?";
}

ActionKind action_kind_from_string(const std::string& s) {
    if (s == "add_include") return ActionKind::add_include;
    if (s == "add_exclude") return ActionKind::add_exclude;
    if (s == "change_catalyst_type") return ActionKind::change_catalyst_type;
    if (s == "toggle_oxide") return ActionKind::toggle_oxide;
    if (s == "change_relation") return ActionKind::change_relation;
    if (s == "repeat_prompt") return ActionKind::repeat_prompt;
    throw error("unknown action kind: '" + s + "'");
}

std::string to_string(const Action& a) {
    std::string out = to_string(a.kind);
    if (!a.value.empty()) {
        out += '(';
        out += a.value;
        out += ')';
    }
    return out;
}

const char* to_string(Relation r) {
    switch (r) {
        case Relation::different_from: return "different_from";
        case Relation::similar_to: return "similar_to";
        case Relation::new_elements_to: return "new_elements_to";
        case Relation::elements_from: return "elements_from";
    }
    return "?";
}

const char* relation_phrase(Relation r) {
    switch (r) {
        case Relation::different_from: return "that are different from";
        case Relation::similar_to: return "that are similar to";
        case Relation::new_elements_to: return "that introduce new elements to";
        case Relation::elements_from: return "that include elements from";
    }
    return "?";
}

std::optional<Relation> relation_from_string(const std::string& s) {
    for (Relation r : kAllRelations)
        if (s == to_string(r)) return r;
    return std::nullopt;
}

ActionTable ActionTable::defaults() {
    ActionTable t;
    t.include_props_ = kDefaultIncludeProps;
    t.exclude_props_ = kDefaultExcludeProps;
    t.catalyst_types_ = kDefaultCatalystTypes;
    t.rebuild_enumeration();
    return t;
}

ActionTable ActionTable::load(const std::filesystem::path& config) {
    std::ifstream in(config);
    if (!in) throw schema_error("cannot open actions config: " + config.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw schema_error(std::string("actions config is not valid JSON: ") + e.what());
    }

    ActionTable t = defaults();
    if (!doc.is_object()) throw schema_error("actions config must be a JSON object");
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        throw schema_error("actions config missing integer schema_version");
    t.schema_version_ = doc["schema_version"].get<int>();
    if (t.schema_version_ != 1)
        throw version_error("unsupported actions config schema_version " +
                            std::to_string(t.schema_version_) + " in " + config.string());

    auto read_list = [&](const char* key, std::vector<std::string>& out) {
        if (!doc.contains(key)) return;
        const auto& arr = doc[key];
        if (!arr.is_array()) throw schema_error(std::string(key) + " must be an array of strings");
        std::vector<std::string> vals;
        for (const auto& v : arr) {
            if (!v.is_string()) throw schema_error(std::string(key) + " must contain only strings");
            std::string s = v.get<std::string>();
            if (s.empty()) throw schema_error(std::string(key) + " contains an empty value");
            for (const auto& prev : vals)
                if (prev == s) throw schema_error(std::string(key) + " contains duplicate value '" + s + "'");
            vals.push_back(std::move(s));
        }
        if (vals.empty()) throw schema_error(std::string(key) + " must not be empty");
        out = std::move(vals);
    };
    read_list("include_properties", t.include_props_);
    read_list("exclude_properties", t.exclude_props_);
    read_list("catalyst_types", t.catalyst_types_);
    t.rebuild_enumeration();
    return t;
}

void ActionTable::rebuild_enumeration() {
    enumeration_.clear();
    for (const auto& v : include_props_) enumeration_.push_back({ActionKind::add_include, v});
    for (const auto& v : exclude_props_) enumeration_.push_back({ActionKind::add_exclude, v});
    for (const auto& v : catalyst_types_) enumeration_.push_back({ActionKind::change_catalyst_type, v});
    enumeration_.push_back({ActionKind::toggle_oxide, ""});
    for (Relation r : kAllRelations) enumeration_.push_back({ActionKind::change_relation, to_string(r)});
    enumeration_.push_back({ActionKind::repeat_prompt, ""});
}

std::optional<std::size_t> ActionTable::index_of(const Action& a) const {
    for (std::size_t i = 0; i < enumeration_.size(); ++i)
        if (enumeration_[i] == a) return i;
    return std::nullopt;
}

} // namespace mcr
