#pragma once

#include "mcr/env.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mcr {

// Reward landscapes for the deterministic mock:
//  - uniform: magnitudes depend only on (seed, candidate), no structure.
//  - depth_monotone: any prompt refinement (property, type, oxide, relation)
//    raises the reachable magnitude, so any child can outscore the root.
//  - property_keyed: a seed-fixed subset of include properties raises the
//    magnitude; prompts must name those properties to reach high tiers.
//  - deceptive: single refinements hurt; only stacking three or more matched
//    properties pays off.
enum class MockLandscape { uniform, depth_monotone, property_keyed, deceptive };

const char* to_string(MockLandscape l);
MockLandscape mock_landscape_from_string(const std::string& s);

struct MockProfile {
    std::uint64_t seed = 0;
    std::vector<std::string> catalyst_vocabulary; // empty = built-in list
    MockLandscape landscape = MockLandscape::uniform;
    double noise = 0.05;          // Gaussian scale on |energy|
    double base_magnitude = 1.0;  // |energy| at quality 0
    double tier_bonus = 2.5;      // |energy| gained per quality tier
    int target_subset_size = 6;   // properties in the keyed subset
    std::vector<std::string> include_vocabulary; // empty = table defaults
    std::vector<std::string> exclude_vocabulary; // empty = table defaults
    int default_k = 5;            // when "top {k}" cannot be read off the prompt
};

// Seeded stand-in for a text-completion model. Every reply is a pure function
// of (seed, salt, prompt, purpose): answer requests yield a numbered top-k
// candidate list whose names sit on a quality tier derived from the prompt;
// reward requests yield a bracketed list of negative adsorption energies
// whose magnitudes follow the landscape.
class MockBackend final : public Backend {
public:
    explicit MockBackend(MockProfile profile = {});

    std::string complete(const CompletionRequest& request) override;
    nlohmann::json fingerprint() const override;

    const MockProfile& profile() const { return profile_; }
    // The seed-fixed property subset rewarded by property_keyed/deceptive.
    const std::vector<std::string>& target_properties() const { return target_props_; }
    int quality_of_prompt(const std::string& prompt) const;
    int tier_of(const std::string& candidate) const;
    int max_tier() const { return max_tier_; }

private:
    std::string answer_reply(const CompletionRequest& request) const;
    std::string reward_reply(const CompletionRequest& request) const;

    MockProfile profile_;
    std::vector<std::string> target_props_;
    int max_tier_;
};

} // namespace mcr
