#pragma once

#include "mcr/env.hpp"
#include "mcr/prompt_state.hpp"
#include "mcr/reward.hpp"
#include "mcr/search_tree.hpp"

#include <functional>

namespace mcr {

using RewardFn = std::function<RewardEvaluation(Environment&, const std::vector<std::string>&,
                                                const std::vector<std::string>&, std::uint64_t)>;

struct EvaluationOutcome {
    Answer answer;
    double reward = 0;
    bool reward_failed = false;
};

// One full node evaluation: answer query, candidate extraction, reward
// computation. Answer-parse failures and exhausted reward retries record a
// zero reward with the failure flag instead of aborting the run; transport
// errors propagate.
EvaluationOutcome evaluate_prompt(Environment& env, const std::string& rendered_prompt,
                                  const RootQuery& query, std::uint64_t salt,
                                  const RewardFn& reward_fn);

// compute_reward wrapped in the RewardFn signature.
RewardFn default_reward_fn();

} // namespace mcr
