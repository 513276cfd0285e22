#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mcr {

enum class ActionKind {
    add_include,
    add_exclude,
    change_catalyst_type,
    toggle_oxide,
    change_relation,
    repeat_prompt,
};

const char* to_string(ActionKind kind);
ActionKind action_kind_from_string(const std::string& s);

// A discrete prompt edit. `value` holds the payload for the list-valued
// kinds and is empty for toggle_oxide / repeat_prompt.
struct Action {
    ActionKind kind;
    std::string value;

    auto operator<=>(const Action&) const = default;
};

std::string to_string(const Action& a);

// How a child prompt relates to its parent's candidate list. The four values
// are structural (they carry fixed surface phrases), unlike the property
// vocabularies which are data.
enum class Relation {
    different_from,
    similar_to,
    new_elements_to,
    elements_from,
};

inline constexpr Relation kAllRelations[] = {
    Relation::different_from,
    Relation::similar_to,
    Relation::new_elements_to,
    Relation::elements_from,
};

const char* to_string(Relation r);          // stable token, e.g. "different_from"
const char* relation_phrase(Relation r);     // surface text, e.g. "that are different from"
std::optional<Relation> relation_from_string(const std::string& s);

// The action table: which payload values each action kind admits, in a fixed
// enumeration order. Property vocabularies and catalyst types are data and
// can be loaded from a versioned config file; relations, the oxide toggle and
// repeat are structural. All counts are derived from the lists.
class ActionTable {
public:
    static ActionTable defaults();
    static ActionTable load(const std::filesystem::path& config); // throws schema_error

    const std::vector<std::string>& include_properties() const { return include_props_; }
    const std::vector<std::string>& exclude_properties() const { return exclude_props_; }
    const std::vector<std::string>& catalyst_types() const { return catalyst_types_; }

    // Every enumerable (kind, value) pair in table order:
    // add_include*, add_exclude*, change_catalyst_type*, toggle_oxide,
    // change_relation*, repeat_prompt.
    const std::vector<Action>& enumerate() const { return enumeration_; }

    // Position in enumerate(), used for deterministic tie-breaking.
    std::optional<std::size_t> index_of(const Action& a) const;
    bool knows(const Action& a) const { return index_of(a).has_value(); }

    int schema_version() const { return schema_version_; }

private:
    ActionTable() = default;
    void rebuild_enumeration();

    std::vector<std::string> include_props_;
    std::vector<std::string> exclude_props_;
    std::vector<std::string> catalyst_types_;
    std::vector<Action> enumeration_;
    int schema_version_ = 1;
};

} // namespace mcr
