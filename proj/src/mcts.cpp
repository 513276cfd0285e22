#include "mcr/mcts.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <cassert>
#include <cmath>

namespace mcr {

nlohmann::json SearchConfig::to_json() const {
    return nlohmann::json{{"gamma", gamma},
                          {"c", exploration_c},
                          {"budget", budget},
                          {"k", top_k},
                          {"max_depth_guard", max_depth_guard},
                          {"seed", seed}};
}

McrEngine::McrEngine(const ActionTable& table, Environment& env, SearchConfig config,
                     RewardFn reward_fn)
    : table_(table),
      env_(env),
      config_(config),
      reward_fn_(reward_fn ? std::move(reward_fn) : default_reward_fn()),
      rng_(config.seed) {}

double McrEngine::uniform_unit() {
    return unit_double(rng_());
}

NodeId McrEngine::evaluate_root(SearchTree& tree, const RootQuery& query) {
    PromptState root = make_root_state(query);
    std::string rendered = render_prompt(root);
    NodeId id = tree.add_root(std::move(root), std::move(rendered));
    EvaluationOutcome out =
        evaluate_prompt(env_, tree.node(id).rendered_prompt, query, 0, reward_fn_);
    tree.record_answer(id, std::move(out.answer));
    tree.record_reward(id, out.reward, out.reward_failed);
    return id;
}

Action McrEngine::select_action(const SearchTree& tree, NodeId node) {
    return select_impl(tree, node, false);
}

Action McrEngine::select_impl(const SearchTree& tree, NodeId node, bool boundary_mask) {
    const Node& n = tree.node(node);
    std::vector<std::pair<Action, double>> priors = action_priors(n.state, table_);
    if (priors.empty()) throw error("no legal actions at node " + std::to_string(node));

    if (boundary_mask) {
        // Next expansion would reach the depth guard: only consider actions
        // that can still expand here (no child yet, or repeat_prompt, whose
        // occurrence keys are always free). When everything is occupied the
        // caller simply descends one level further.
        std::vector<std::pair<Action, double>> masked;
        for (const auto& [a, p] : priors) {
            const EdgeStats* e = tree.find_edge(node, a);
            if (a.kind == ActionKind::repeat_prompt || !e || e->children.empty())
                masked.emplace_back(a, p);
        }
        if (!masked.empty()) priors = std::move(masked);
    }

    if (tree.is_leaf(node)) {
        // Leaf rule: the policy is the prior distribution.
        double total = 0;
        for (const auto& [a, p] : priors) total += p;
        double u = uniform_unit() * total;
        double acc = 0;
        for (const auto& [a, p] : priors) {
            acc += p;
            if (u < acc) return a;
        }
        return priors.back().first;
    }

    const double sum_visits = static_cast<double>(tree.total_visits(node));
    const double root_term = std::sqrt(sum_visits);
    const Action* best = nullptr;
    double best_score = 0;
    for (const auto& [a, p] : priors) {
        const EdgeStats* e = tree.find_edge(node, a);
        const int visits = e ? e->visits : 0;
        const double value = e ? e->total_value : 0.0;
        // First term dropped when the pair has no visits.
        double score = visits > 0 ? value / visits : 0.0;
        score += config_.exploration_c * p * root_term / (1.0 + visits);
        if (!best || score > best_score) {
            best = &a;
            best_score = score;
        }
    }
    return *best;
}

NodeId McrEngine::simulate_once(SearchTree& tree, const RootQuery& query) {
    if (tree.empty() || !tree.node(tree.root_id()).reward)
        throw error("simulate_once needs an evaluated root");

    NodeId cur = tree.root_id();
    for (;;) {
        const bool boundary = tree.node(cur).depth + 1 >= config_.max_depth_guard;
        const Action action = select_impl(tree, cur, boundary);
        const double p = prior_probability(tree.node(cur).state, table_, action);
        tree.increment_visit(cur, action, p);
        const EdgeStats* e = tree.find_edge(cur, action);
        assert(e != nullptr);
        if (action.kind != ActionKind::repeat_prompt && !e->children.empty()) {
            cur = e->children.front(); // deterministic edits descend to their one child
            continue;
        }

        PromptState child_state = apply_action_unchecked(tree.node(cur).state, action);
        const Node& parent = tree.node(cur);
        if (parent.answer && !parent.answer->candidates.empty()) {
            child_state.prev_candidates = parent.answer->candidates;
        } else {
            // No usable parent answer: the child starts over candidate-wise.
            child_state.prev_candidates.reset();
            child_state.relation_to_prev.reset();
        }
        std::string rendered = render_prompt(child_state);
        NodeId child = tree.add_node(cur, action, std::move(child_state), std::move(rendered), p);
        if (tree.node(child).depth >= config_.max_depth_guard) tree.mark_depth_guard_hit(child);

        EvaluationOutcome out =
            evaluate_prompt(env_, tree.node(child).rendered_prompt, query, 0, reward_fn_);
        tree.record_answer(child, std::move(out.answer));
        tree.record_reward(child, out.reward, out.reward_failed);
        tree.backpropagate(child, out.reward, config_.gamma);
        return child;
    }
}

RunResult McrEngine::run(SearchTree& tree, const RootQuery& query, const ProgressFn& progress) {
    if (tree.empty()) evaluate_root(tree, query);
    double best = tree.node(tree.root_id()).reward.value_or(0.0);
    if (progress) progress(0, tree.root_id(), best);
    for (int sim = 1; sim <= config_.budget; ++sim) {
        NodeId added = simulate_once(tree, query);
        best = std::max(best, tree.node(added).reward.value_or(0.0));
        if (progress) progress(sim, added, best);
    }
    RunResult result;
    result.best_node = best_node_by_reward(tree);
    result.metrics = tree.metrics();
    result.detail = nlohmann::json{{"depth_guard_hits", result.metrics.depth_guard_hits}};
    return result;
}

NodeId best_node_by_reward(const SearchTree& tree) {
    if (tree.empty()) throw empty_tree("no nodes to pick a best answer from");
    const Node* best = nullptr;
    for (const Node& n : tree.nodes()) {
        if (!n.reward) continue;
        if (!best || *n.reward > *best->reward) best = &n;
    }
    if (!best) throw empty_tree("no evaluated nodes in tree");
    return best->id;
}

} // namespace mcr
