#include <doctest.h>

#include "mcr/actions.hpp"
#include "mcr/errors.hpp"
#include "test_support.hpp"

#include <fstream>

using namespace mcr;

TEST_SUITE("actions") {

TEST_CASE("default table carries the printed vocabularies") {
    ActionTable t = ActionTable::defaults();
    CHECK(t.include_properties().size() == 10);
    CHECK(t.exclude_properties().size() == 8);
    CHECK(t.catalyst_types().size() == 4);
    CHECK(t.include_properties().front() == "high activity");
    CHECK(t.include_properties().back() == "availability");
    CHECK(t.exclude_properties().front() == "low activity");
    CHECK(t.catalyst_types().back() == "catalyst");
    // 10 + 8 + 4 + toggle + 4 relations + repeat
    CHECK(t.enumerate().size() == 28);
}

TEST_CASE("enumeration order is includes, excludes, types, toggle, relations, repeat") {
    ActionTable t = ActionTable::defaults();
    const auto& e = t.enumerate();
    CHECK(e[0] == Action{ActionKind::add_include, "high activity"});
    CHECK(e[9] == Action{ActionKind::add_include, "availability"});
    CHECK(e[10] == Action{ActionKind::add_exclude, "low activity"});
    CHECK(e[18] == Action{ActionKind::change_catalyst_type, "unary catalyst"});
    CHECK(e[22] == Action{ActionKind::toggle_oxide, ""});
    CHECK(e[23] == Action{ActionKind::change_relation, "different_from"});
    CHECK(e[27] == Action{ActionKind::repeat_prompt, ""});
}

TEST_CASE("enumeration is stable across instances") {
    CHECK(ActionTable::defaults().enumerate() == ActionTable::defaults().enumerate());
}

TEST_CASE("index_of identifies known and unknown actions") {
    ActionTable t = ActionTable::defaults();
    for (std::size_t i = 0; i < t.enumerate().size(); ++i)
        CHECK(t.index_of(t.enumerate()[i]) == i);
    CHECK_FALSE(t.index_of({ActionKind::add_include, "made up"}).has_value());
    CHECK_FALSE(t.knows({ActionKind::change_relation, "sideways"}));
}

TEST_CASE("relation tokens and phrases") {
    CHECK(relation_from_string("similar_to") == Relation::similar_to);
    CHECK_FALSE(relation_from_string("nope").has_value());
    CHECK(std::string(relation_phrase(Relation::new_elements_to)) ==
          "that introduce new elements to");
}

TEST_CASE("config file extends the vocabularies and counts follow the data") {
    test::TempDir dir("actions");
    auto path = dir.path / "actions.json";
    {
        std::ofstream out(path);
        out << R"({"schema_version":1,
                   "include_properties":["high activity","thermal stability"],
                   "exclude_properties":["low activity"]})";
    }
    ActionTable t = ActionTable::load(path);
    CHECK(t.include_properties().size() == 2);
    CHECK(t.exclude_properties().size() == 1);
    CHECK(t.catalyst_types().size() == 4); // untouched keys keep defaults
    CHECK(t.enumerate().size() == 2 + 1 + 4 + 1 + 4 + 1);
    CHECK(t.knows({ActionKind::add_include, "thermal stability"}));
}

TEST_CASE("config file errors") {
    test::TempDir dir("actions_bad");
    auto write = [&](const char* name, const char* body) {
        auto p = dir.path / name;
        std::ofstream(p) << body;
        return p;
    };
    CHECK_THROWS_AS(ActionTable::load(dir.path / "missing.json"), schema_error);
    CHECK_THROWS_AS(ActionTable::load(write("nojson.json", "{oops")), schema_error);
    CHECK_THROWS_AS(ActionTable::load(write("nover.json", R"({"include_properties":["x"]})")),
                    schema_error);
    CHECK_THROWS_AS(ActionTable::load(write("badver.json", R"({"schema_version":99})")),
                    version_error);
    CHECK_THROWS_AS(
        ActionTable::load(write("dup.json",
                                R"({"schema_version":1,"include_properties":["a","a"]})")),
        schema_error);
    CHECK_THROWS_AS(
        ActionTable::load(write("empty.json",
                                R"({"schema_version":1,"exclude_properties":[]})")),
        schema_error);
    CHECK_THROWS_AS(
        ActionTable::load(write("nonstr.json",
                                R"({"schema_version":1,"catalyst_types":[3]})")),
        schema_error);
}

TEST_CASE("action kind strings round-trip") {
    for (ActionKind k :
         {ActionKind::add_include, ActionKind::add_exclude, ActionKind::change_catalyst_type,
          ActionKind::toggle_oxide, ActionKind::change_relation, ActionKind::repeat_prompt})
        CHECK(action_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(action_kind_from_string("fly"), error);
}

} // TEST_SUITE
