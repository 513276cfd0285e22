#pragma once

#include "mcr/prompt_state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mcr {

using NodeId = std::uint32_t;

struct Answer {
    std::string raw_text;
    std::vector<std::string> candidates;

    bool operator==(const Answer&) const = default;
};

struct ParentLink {
    NodeId id;
    Action action;
    int occurrence = 0; // >0 only for repeat_prompt siblings

    bool operator==(const ParentLink&) const = default;
};

struct Node {
    NodeId id = 0;
    int depth = 0;
    std::optional<ParentLink> parent;
    PromptState state;
    std::string rendered_prompt;
    std::optional<Answer> answer;
    std::optional<double> reward; // present iff the node was evaluated
    bool reward_failed = false;   // reward recorded as 0 after exhausted retries
    bool depth_guard_hit = false;

    bool operator==(const Node&) const = default;
};

// Per-(node, action) statistics. `children` is ordered by occurrence; it has
// at most one entry for deterministic actions and one entry per traversal for
// repeat_prompt.
struct EdgeStats {
    int visits = 0;        // N
    double total_value = 0; // V, discounted downstream reward
    double prior = 0;       // p
    std::vector<NodeId> children;

    bool operator==(const EdgeStats&) const = default;
};

struct RunMetrics {
    double best_reward = 0;
    int prompts_evaluated = 0; // nodes with a recorded reward
    int max_depth = 0;
    int depth_guard_hits = 0;

    bool operator==(const RunMetrics&) const = default;
};

// The prompt tree. Nodes are indexed by creation order (node 0 is the root);
// edges hang off their parent node keyed by action. Single writer; concurrent
// reads are fine between mutations.
class SearchTree {
public:
    using EdgeMap = std::map<Action, EdgeStats>;

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    NodeId root_id() const { return 0; }

    const Node& node(NodeId id) const;
    const std::vector<Node>& nodes() const { return nodes_; }
    const EdgeMap& edges(NodeId id) const;

    NodeId add_root(PromptState state, std::string rendered_prompt);
    // Throws unknown_parent / duplicate_edge (non-repeat collision).
    NodeId add_node(NodeId parent, const Action& action, PromptState state,
                    std::string rendered_prompt, double prior_p);

    void record_answer(NodeId id, Answer answer);
    void record_reward(NodeId id, double reward, bool failed = false);
    void mark_depth_guard_hit(NodeId id);

    // Materializes the stats entry with the given prior on first touch.
    EdgeStats& edge(NodeId id, const Action& action, double prior_p);
    const EdgeStats* find_edge(NodeId id, const Action& action) const;
    void increment_visit(NodeId id, const Action& action, double prior_p);
    bool is_leaf(NodeId id) const; // no realized children

    int total_visits(NodeId id) const; // sum of N over the node's edges

    // Adds gamma^(leaf_depth - ancestor_depth) * reward to every edge on the
    // root path. Visit counts are untouched.
    void backpropagate(NodeId leaf, double reward, double gamma);

    RunMetrics metrics() const; // throws empty_tree

    bool operator==(const SearchTree&) const = default;

    nlohmann::json to_json() const; // throws empty_tree
    static SearchTree from_json(const nlohmann::json& doc); // throws malformed_document
    std::string to_dot() const;

private:
    Node& node_mut(NodeId id);

    std::vector<Node> nodes_;
    std::vector<EdgeMap> edges_;
};

} // namespace mcr
