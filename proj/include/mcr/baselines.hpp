#pragma once

#include "mcr/evaluate.hpp"
#include "mcr/mcts.hpp"

#include <functional>

namespace mcr {

struct ToTConfig {
    int branching = 6;   // nodes expanded per level, by reward
    int action_cap = 12; // actions per expanded node, highest prior first
    int depth = 5;       // levels below the root
    // Test hook: overrides legal_actions with a synthetic action space.
    std::function<std::vector<Action>(const PromptState&)> action_enumerator;
};

// One root prompt, one evaluation. Reported depth for the single-prompt
// methods is 0 and rendered as "-" by reports.
RunResult run_cot(SearchTree& tree, Environment& env, const RootQuery& query,
                  std::uint64_t salt = 0, const RewardFn& reward_fn = {});

// `trials` independent evaluations of the root prompt, salted per trial so
// stochastic backends (and the mock) vary; scored by the maximum trial
// reward. The dump tree holds the best trial; per-trial rewards live in the
// result detail. Throws when every trial fails.
RunResult run_self_consistency(SearchTree& tree, Environment& env, const RootQuery& query,
                               int trials = 10, const RewardFn& reward_fn = {});

// Breadth-first tree-of-thoughts: at each level the top-`branching` nodes of
// the previous level expand up to `action_cap` actions (uniform priors make
// that the first legal actions in enumeration order), every child is
// evaluated, down to `depth` levels.
RunResult run_tot_bfs(SearchTree& tree, const ActionTable& table, Environment& env,
                      const RootQuery& query, const ToTConfig& config = {},
                      const RewardFn& reward_fn = {});

} // namespace mcr
