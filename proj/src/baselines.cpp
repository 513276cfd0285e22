#include "mcr/baselines.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <algorithm>

namespace mcr {

using nlohmann::json;

namespace {

struct Trial {
    std::uint64_t salt;
    EvaluationOutcome outcome;
};

Trial evaluate_root_prompt(Environment& env, const RootQuery& query, std::uint64_t salt,
                           const RewardFn& reward_fn) {
    PromptState root = make_root_state(query);
    Trial t{salt, evaluate_prompt(env, render_prompt(root), query, salt,
                                  reward_fn ? reward_fn : default_reward_fn())};
    return t;
}

void install_root(SearchTree& tree, const RootQuery& query, EvaluationOutcome outcome) {
    PromptState root = make_root_state(query);
    std::string rendered = render_prompt(root);
    NodeId id = tree.add_root(std::move(root), std::move(rendered));
    tree.record_answer(id, std::move(outcome.answer));
    tree.record_reward(id, outcome.reward, outcome.reward_failed);
}

} // namespace

RunResult run_cot(SearchTree& tree, Environment& env, const RootQuery& query, std::uint64_t salt,
                  const RewardFn& reward_fn) {
    Trial t = evaluate_root_prompt(env, query, salt, reward_fn);
    install_root(tree, query, std::move(t.outcome));
    RunResult result;
    result.best_node = tree.root_id();
    result.metrics = tree.metrics();
    result.detail = json::object();
    return result;
}

RunResult run_self_consistency(SearchTree& tree, Environment& env, const RootQuery& query,
                               int trials, const RewardFn& reward_fn) {
    if (trials < 1) throw error("self-consistency needs at least one trial");
    std::vector<Trial> all;
    all.reserve(trials);
    int best = -1;
    for (int i = 0; i < trials; ++i) {
        all.push_back(evaluate_root_prompt(env, query, static_cast<std::uint64_t>(i), reward_fn));
        const Trial& t = all.back();
        if (best < 0 || t.outcome.reward > all[best].outcome.reward) best = i;
    }
    bool any_ok = std::any_of(all.begin(), all.end(),
                              [](const Trial& t) { return !t.outcome.reward_failed; });
    if (!any_ok) throw error("all " + std::to_string(trials) + " self-consistency trials failed");

    json trial_rows = json::array();
    for (int i = 0; i < trials; ++i)
        trial_rows.push_back(json{{"trial", i},
                                  {"salt", all[i].salt},
                                  {"reward", format_double17(all[i].outcome.reward)},
                                  {"failed", all[i].outcome.reward_failed}});

    install_root(tree, query, std::move(all[best].outcome));
    RunResult result;
    result.best_node = tree.root_id();
    result.metrics = tree.metrics();
    // The paper's table counts every trial as an evaluated prompt even though
    // the dump keeps only the best one as a single-node tree.
    result.metrics.prompts_evaluated = trials;
    result.detail = json{{"trials", trial_rows}, {"best_trial", best}};
    return result;
}

RunResult run_tot_bfs(SearchTree& tree, const ActionTable& table, Environment& env,
                      const RootQuery& query, const ToTConfig& config, const RewardFn& reward_fn) {
    if (config.branching < 1 || config.action_cap < 1 || config.depth < 1)
        throw error("tot config values must be positive");
    const RewardFn& fn = reward_fn ? reward_fn : default_reward_fn();

    {
        Trial t = evaluate_root_prompt(env, query, 0, fn);
        install_root(tree, query, std::move(t.outcome));
    }

    std::vector<NodeId> level{tree.root_id()};
    std::vector<int> level_counts;
    for (int depth = 1; depth <= config.depth && !level.empty(); ++depth) {
        // Expand the highest-reward nodes of the previous level.
        std::vector<NodeId> parents = level;
        std::sort(parents.begin(), parents.end(), [&](NodeId a, NodeId b) {
            double ra = tree.node(a).reward.value_or(0);
            double rb = tree.node(b).reward.value_or(0);
            if (ra != rb) return ra > rb;
            return a < b;
        });
        if (static_cast<int>(parents.size()) > config.branching)
            parents.resize(config.branching);
        std::sort(parents.begin(), parents.end()); // expand in id order

        std::vector<NodeId> next;
        for (NodeId parent_id : parents) {
            const std::vector<Action> actions = config.action_enumerator
                                                    ? config.action_enumerator(tree.node(parent_id).state)
                                                    : legal_actions(tree.node(parent_id).state, table);
            if (actions.empty()) continue;
            // Uniform priors: the cap keeps the first actions in enumeration
            // order. Fewer than action_cap legal actions expand them all.
            const int fan_out = std::min<int>(config.action_cap, static_cast<int>(actions.size()));
            const double prior = 1.0 / static_cast<double>(actions.size());
            for (int i = 0; i < fan_out; ++i) {
                const Action& action = actions[i];
                PromptState child_state =
                    apply_action_unchecked(tree.node(parent_id).state, action);
                const Node& parent = tree.node(parent_id);
                if (parent.answer && !parent.answer->candidates.empty()) {
                    child_state.prev_candidates = parent.answer->candidates;
                } else {
                    child_state.prev_candidates.reset();
                    child_state.relation_to_prev.reset();
                }
                std::string rendered = render_prompt(child_state);
                NodeId child =
                    tree.add_node(parent_id, action, std::move(child_state), std::move(rendered), prior);
                EvaluationOutcome out =
                    evaluate_prompt(env, tree.node(child).rendered_prompt, query, 0, fn);
                tree.record_answer(child, std::move(out.answer));
                tree.record_reward(child, out.reward, out.reward_failed);
                next.push_back(child);
            }
        }
        level_counts.push_back(static_cast<int>(next.size()));
        level = std::move(next);
    }

    RunResult result;
    result.best_node = best_node_by_reward(tree);
    result.metrics = tree.metrics();
    result.detail = json{{"branching", config.branching},
                         {"action_cap", config.action_cap},
                         {"depth", config.depth},
                         {"level_counts", level_counts},
                         {"generated_nodes", tree.size() - 1},
                         {"total_nodes", tree.size()}};
    return result;
}

} // namespace mcr
