#pragma once

#include "mcr/evaluate.hpp"
#include "mcr/search_tree.hpp"

#include <cstdint>
#include <functional>
#include <random>

#include <json.hpp>

namespace mcr {

struct SearchConfig {
    double gamma = 0.9;          // discount on downstream rewards
    double exploration_c = 15.0; // exploration-exploitation trade-off
    int budget = 300;            // simulations after the root evaluation
    int top_k = 5;               // candidates requested per prompt
    int max_depth_guard = 50;    // expansion depth cap; hits are flagged
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

struct RunResult {
    NodeId best_node = 0;
    RunMetrics metrics;
    nlohmann::json detail; // method-specific extras for the dump
};

using ProgressFn = std::function<void(int simulation, NodeId added, double best_reward)>;

// The search loop: repeated root-to-frontier traversal under the selection
// policy, one environment evaluation per simulation, discounted
// backpropagation. One engine instance drives one run.
class McrEngine {
public:
    McrEngine(const ActionTable& table, Environment& env, SearchConfig config,
              RewardFn reward_fn = {});

    // Evaluates the root prompt and installs it as node 0.
    NodeId evaluate_root(SearchTree& tree, const RootQuery& query);

    // Selection at one node: leaf nodes sample from the prior with the run
    // RNG; interior nodes take the argmax of V/N (dropped when N = 0) plus
    // c * p * sqrt(sum_j N) / (1 + N), ties to the lowest enumeration index.
    Action select_action(const SearchTree& tree, NodeId node);

    // One simulation: traverse, expand, evaluate, backpropagate. Returns the
    // new node's id.
    NodeId simulate_once(SearchTree& tree, const RootQuery& query);

    // Root evaluation plus config.budget simulations. The best node is the
    // maximum recorded reward, ties to the lowest id. On error the partially
    // built tree remains valid in `tree`.
    RunResult run(SearchTree& tree, const RootQuery& query, const ProgressFn& progress = {});

    const SearchConfig& config() const { return config_; }

private:
    Action select_impl(const SearchTree& tree, NodeId node, bool boundary_mask);
    double uniform_unit();

    const ActionTable& table_;
    Environment& env_;
    SearchConfig config_;
    RewardFn reward_fn_;
    std::mt19937_64 rng_;
};

NodeId best_node_by_reward(const SearchTree& tree); // ties to lowest id

} // namespace mcr
