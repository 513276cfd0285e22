#pragma once

#include "mcr/env.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mcr {

struct AdsorbateEnergies {
    std::string adsorbate;
    std::string raw_reply;
    std::vector<double> energies; // eV, signs preserved
    double mean_abs = 0;
};

// Eq-style reward: per adsorbate, the mean absolute reported energy of the
// candidate list; the total sums over adsorbates.
struct RewardEvaluation {
    std::vector<AdsorbateEnergies> per_adsorbate; // input order
    double total = 0;
};

// Exact template substitution, including the deliberately unfixed grammar of
// "only 1 numbers". Throws empty_candidate_list.
std::string build_reward_prompt(const std::string& adsorbate,
                                const std::vector<std::string>& candidates);

// Pulls exactly expected_len real numbers out of a model reply, tolerating
// brackets, newlines, numbered bullets, unit suffixes and prose. Bullet
// indices ("3." at the start of a line followed by another number) are not
// values. Order and sign are preserved. Throws parse_failure.
std::vector<double> parse_energy_list(const std::string& text, std::size_t expected_len);

// Queries the environment once per adsorbate with up to 3 attempts each when
// the reply does not parse; retry attempts bypass the cache read. Throws
// reward_unavailable after 3 failures for any adsorbate, empty_candidate_list
// on an empty candidate list; transport errors propagate.
RewardEvaluation compute_reward(Environment& env, const std::vector<std::string>& adsorbates,
                                const std::vector<std::string>& candidates, std::uint64_t salt = 0);

// Extracts up to k catalyst names from a "list of pairs" style answer:
// numbered or bulleted items, (name, explanation) pairs, or a plain comma
// list. Names are the text before the first separator, trimmed, deduplicated
// in order. May return fewer than k; throws no_candidates_found on zero.
std::vector<std::string> parse_candidates(const std::string& answer_text, std::size_t k);

} // namespace mcr
