#pragma once

#include "mcr/actions.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mcr {

enum class QueryKind { open_catalysis, biofuel_qr };

const char* to_string(QueryKind k);
QueryKind query_kind_from_string(const std::string& s);

// The dataset-specific payload of the root prompt. OpenCatalysis queries name
// one adsorbate; BioFuelQR queries are identified by id and always score
// against CO2 and H2.
struct RootQuery {
    QueryKind kind = QueryKind::open_catalysis;
    std::string adsorbate;    // open_catalysis only
    std::string question_id;  // biofuel_qr only
    int top_k = 5;

    std::vector<std::string> adsorbates() const;

    bool operator==(const RootQuery&) const = default;
};

// The template-filling state P. One state renders to exactly one prompt.
// Immutable value type; all operations below are pure.
struct PromptState {
    std::vector<std::string> include_props;
    std::vector<std::string> exclude_props;
    std::string catalyst_type = "catalyst";
    bool oxide = false;
    std::optional<Relation> relation_to_prev;
    // Parent node's parsed answer, injected by the engine before rendering.
    // A state may carry candidates without a relation (the relation is set by
    // the next action); it never carries a relation without candidates.
    std::optional<std::vector<std::string>> prev_candidates;
    RootQuery query;

    bool operator==(const PromptState&) const = default;
};

PromptState make_root_state(const RootQuery& q);

// Every enumerable action minus the impossible ones:
//  (a) add_include/add_exclude whose payload the state already has,
//  (b) change_relation when there is no candidate list,
//  (c) everything except change_relation when candidates are present but the
//      relation is not yet set.
// Order matches ActionTable::enumerate().
std::vector<Action> legal_actions(const PromptState& s, const ActionTable& table);

// Uniform prior over legal actions, in legal_actions order. Sums to 1.
std::vector<std::pair<Action, double>> action_priors(const PromptState& s, const ActionTable& table);

// Prior of one action; 0 for illegal or unknown actions.
double prior_probability(const PromptState& s, const ActionTable& table, const Action& a);

// Applies a legal action, returning the edited state. repeat_prompt returns
// an identical field set (the new node re-queries the same prompt). Throws
// illegal_action when `a` is not in legal_actions(s).
PromptState apply_action(const PromptState& s, const ActionTable& table, const Action& a);

// Field edit without the legality check. Used by the engine after it has
// already selected from legal_actions, and by the synthetic all-actions-legal
// harness in tests.
PromptState apply_action_unchecked(const PromptState& s, const Action& a);

// Fills the dataset-appropriate template. Deterministic: equal states render
// byte-equal text. Empty optional fields substitute as empty strings, so
// surrounding spaces from the template survive; compare normalized when that
// matters.
std::string render_prompt(const PromptState& s);

} // namespace mcr
