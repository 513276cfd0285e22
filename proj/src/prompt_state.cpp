#include "mcr/prompt_state.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <algorithm>
#include <cassert>

namespace mcr {

const char* to_string(QueryKind k) {
    switch (k) {
        case QueryKind::open_catalysis: return "open_catalysis";
        case QueryKind::biofuel_qr: return "biofuel_qr";
    }
    return "?";
}

QueryKind query_kind_from_string(const std::string& s) {
    if (s == "open_catalysis") return QueryKind::open_catalysis;
    if (s == "biofuel_qr") return QueryKind::biofuel_qr;
    throw error("unknown query kind: '" + s + "'");
}

std::vector<std::string> RootQuery::adsorbates() const {
    if (kind == QueryKind::open_catalysis) return {adsorbate};
    return {"CO2", "H2"};
}

PromptState make_root_state(const RootQuery& q) {
    PromptState s;
    s.query = q;
    return s;
}

namespace {

bool has_prop(const std::vector<std::string>& props, const std::string& v) {
    return std::find(props.begin(), props.end(), v) != props.end();
}

bool candidates_nonempty(const PromptState& s) {
    return s.prev_candidates.has_value() && !s.prev_candidates->empty();
}

} // namespace

std::vector<Action> legal_actions(const PromptState& s, const ActionTable& table) {
    const bool have_candidates = candidates_nonempty(s);
    // Rule (c): inherited candidates must be given a relation before any
    // other edit is allowed.
    const bool relation_forced = have_candidates && !s.relation_to_prev.has_value();

    std::vector<Action> out;
    for (const Action& a : table.enumerate()) {
        if (relation_forced) {
            if (a.kind == ActionKind::change_relation) out.push_back(a);
            continue;
        }
        switch (a.kind) {
            case ActionKind::add_include:
                if (!has_prop(s.include_props, a.value)) out.push_back(a);
                break;
            case ActionKind::add_exclude:
                if (!has_prop(s.exclude_props, a.value)) out.push_back(a);
                break;
            case ActionKind::change_relation:
                // Rule (b): no relation without a candidate list.
                if (have_candidates) out.push_back(a);
                break;
            case ActionKind::change_catalyst_type:
            case ActionKind::toggle_oxide:
            case ActionKind::repeat_prompt:
                out.push_back(a);
                break;
        }
    }
    return out;
}

std::vector<std::pair<Action, double>> action_priors(const PromptState& s, const ActionTable& table) {
    std::vector<Action> legal = legal_actions(s, table);
    std::vector<std::pair<Action, double>> out;
    if (legal.empty()) return out; // unreachable: repeat_prompt or change_relation is always legal
    const double p = 1.0 / static_cast<double>(legal.size());
    out.reserve(legal.size());
    for (Action& a : legal) out.emplace_back(std::move(a), p);
    return out;
}

double prior_probability(const PromptState& s, const ActionTable& table, const Action& a) {
    std::vector<Action> legal = legal_actions(s, table);
    if (std::find(legal.begin(), legal.end(), a) == legal.end()) return 0.0;
    return 1.0 / static_cast<double>(legal.size());
}

PromptState apply_action_unchecked(const PromptState& s, const Action& a) {
    PromptState next = s;
    switch (a.kind) {
        case ActionKind::add_include:
            next.include_props.push_back(a.value);
            break;
        case ActionKind::add_exclude:
            next.exclude_props.push_back(a.value);
            break;
        case ActionKind::change_catalyst_type:
            next.catalyst_type = a.value;
            break;
        case ActionKind::toggle_oxide:
            next.oxide = !next.oxide;
            break;
        case ActionKind::change_relation: {
            auto r = relation_from_string(a.value);
            if (!r) throw illegal_action("unknown relation value '" + a.value + "'");
            next.relation_to_prev = *r;
            break;
        }
        case ActionKind::repeat_prompt:
            break; // identity on template fields
    }
    return next;
}

PromptState apply_action(const PromptState& s, const ActionTable& table, const Action& a) {
    std::vector<Action> legal = legal_actions(s, table);
    if (std::find(legal.begin(), legal.end(), a) == legal.end())
        throw illegal_action("action " + to_string(a) + " is not legal in this state");
    return apply_action_unchecked(s, a);
}

namespace {

std::string catalyst_label_text(const PromptState& s) {
    std::string label;
    if (s.oxide) label += "metal oxide ";
    label += s.catalyst_type;
    label += 's'; // "unary catalyst" -> "unary catalysts" etc.
    return label;
}

std::string candidate_list_statement(const PromptState& s) {
    if (!s.relation_to_prev || !s.prev_candidates || s.prev_candidates->empty()) return "";
    std::string out = relation_phrase(*s.relation_to_prev);
    out += " [";
    out += join(*s.prev_candidates, ", ");
    out += ']';
    return out;
}

std::string property_statement(const char* verb, const std::vector<std::string>& props) {
    if (props.empty()) return "";
    std::string out = "You should ";
    out += verb;
    out += " candidate catalysts with the following properties: ";
    out += join(props, ", ");
    out += '.';
    return out;
}

} // namespace

std::string render_prompt(const PromptState& s) {
    const std::string label = catalyst_label_text(s);
    const std::string candidates = candidate_list_statement(s);
    const std::string include_stmt = property_statement("include", s.include_props);
    const std::string exclude_stmt = property_statement("exclude", s.exclude_props);
    const std::string k = std::to_string(s.query.top_k);

    std::string out;
    if (s.query.kind == QueryKind::open_catalysis) {
        out = "Generate a list of candidate " + label + " " + candidates +
              " for the adsorption of " + s.query.adsorbate + ". " + include_stmt + " " +
              exclude_stmt +
              " Let's think step-by-step and return a list of top " + k +
              " answers and their explanations as a list of pairs.";
    } else {
        out = "What are the top-" + k + " " + label + " " + candidates +
              " that perform the RWGS reaction at a lower temperature (<200 C) and demonstrate "
              "higher adsorption energy for both CO2 and H2 (or facilitates both CO2 and H2 "
              "adsorption)?. " + include_stmt + " " + exclude_stmt +
              " Provide scientific explanations and return a list of top " + k +
              " answers and their explanations as a list of pairs. Let's think step-by-step.";
    }
    return out;
}

} // namespace mcr
