#include "mcr/evaluate.hpp"

#include "mcr/errors.hpp"

namespace mcr {

RewardFn default_reward_fn() {
    return [](Environment& env, const std::vector<std::string>& adsorbates,
              const std::vector<std::string>& candidates, std::uint64_t salt) {
        return compute_reward(env, adsorbates, candidates, salt);
    };
}

EvaluationOutcome evaluate_prompt(Environment& env, const std::string& rendered_prompt,
                                  const RootQuery& query, std::uint64_t salt,
                                  const RewardFn& reward_fn) {
    EvaluationOutcome out;
    out.answer.raw_text = env.complete(Purpose::answer, rendered_prompt, salt);
    try {
        out.answer.candidates =
            parse_candidates(out.answer.raw_text, static_cast<std::size_t>(query.top_k));
    } catch (const no_candidates_found&) {
        out.reward_failed = true;
        return out; // zero reward, nothing to score
    }
    try {
        const RewardFn& fn = reward_fn;
        RewardEvaluation ev = fn(env, query.adsorbates(), out.answer.candidates, salt);
        out.reward = ev.total;
    } catch (const reward_unavailable&) {
        out.reward = 0;
        out.reward_failed = true;
    }
    return out;
}

} // namespace mcr
