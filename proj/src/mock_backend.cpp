#include "mcr/mock_backend.hpp"

#include "mcr/actions.hpp"
#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace mcr {

namespace {

const std::vector<std::string> kDefaultVocabulary = {
    "Pt",      "Pd",      "Ni",     "Cu",      "Ag",      "Au",      "Ru",     "Rh",
    "Ir",      "Fe",      "Co",     "Zn",      "Sn",      "Mo",      "W",      "Re",
    "PtRu",    "PtNi",    "PdAu",   "CuZn",    "NiFe",    "CoMo",    "NiMo",   "FeCr",
    "CuNi",    "AgPd",    "AuCu",   "RuSn",    "PtCo",    "IrRe",    "Pt3Ni",  "Cu3Au",
    "NiCoFe",  "PtRuMo",  "CuZnAl", "FeCoNi",  "PdAgAu",  "NiMoW",   "TiO2",   "ZnO",
    "CeO2",    "Al2O3",   "ZrO2",   "MgO",     "La2O3",   "Fe2O3",   "Co3O4",  "NiO",
    "Cu2O",    "MoO3",    "WO3",    "MnO2",    "Cr2O3",   "V2O5",    "SnO2",   "In2O3",
};

const char* kExplanations[] = {
    "strong binding affinity at the active site",
    "favorable surface electronic structure",
    "well documented activity for this chemistry",
    "stable under the expected reaction conditions",
    "good balance of adsorption strength and turnover",
    "abundant step sites that anchor the adsorbate",
    "tunable d-band center for intermediate binding",
    "resists sintering and surface poisoning",
};

// Extracts the first integer following "top " or "top-".
int parse_top_k(const std::string& prompt, int fallback) {
    for (size_t pos = prompt.find("top"); pos != std::string::npos;
         pos = prompt.find("top", pos + 3)) {
        size_t i = pos + 3;
        if (i < prompt.size() && (prompt[i] == ' ' || prompt[i] == '-')) {
            ++i;
            size_t start = i;
            while (i < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[i]))) ++i;
            if (i > start) return std::stoi(prompt.substr(start, i - start));
        }
    }
    return fallback;
}

int parse_expected_count(const std::string& prompt, int fallback) {
    const std::string marker = "list of only ";
    size_t pos = prompt.find(marker);
    if (pos == std::string::npos) return fallback;
    size_t i = pos + marker.size();
    size_t start = i;
    while (i < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[i]))) ++i;
    if (i == start) return fallback;
    return std::stoi(prompt.substr(start, i - start));
}

// Candidate names between "catalysts: " and the trailing ". Return".
std::vector<std::string> parse_reward_candidates(const std::string& prompt) {
    const std::string marker = "following catalysts: ";
    size_t pos = prompt.find(marker);
    if (pos == std::string::npos) return {};
    size_t start = pos + marker.size();
    size_t end = prompt.find(". Return", start);
    if (end == std::string::npos) end = prompt.size();
    std::vector<std::string> names;
    std::string segment = prompt.substr(start, end - start);
    size_t from = 0;
    while (from <= segment.size()) {
        size_t comma = segment.find(", ", from);
        std::string piece = comma == std::string::npos ? segment.substr(from)
                                                       : segment.substr(from, comma - from);
        piece = trim(piece);
        if (!piece.empty()) names.push_back(piece);
        if (comma == std::string::npos) break;
        from = comma + 2;
    }
    return names;
}

double gauss(std::uint64_t bits_a, std::uint64_t bits_b) {
    double u1 = std::max(unit_double(bits_a), 1e-12);
    double u2 = unit_double(bits_b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

const char* to_string(MockLandscape l) {
    switch (l) {
        case MockLandscape::uniform: return "uniform";
        case MockLandscape::depth_monotone: return "depth_monotone";
        case MockLandscape::property_keyed: return "property_keyed";
        case MockLandscape::deceptive: return "deceptive";
    }
    return "?";
}

MockLandscape mock_landscape_from_string(const std::string& s) {
    if (s == "uniform") return MockLandscape::uniform;
    if (s == "depth_monotone") return MockLandscape::depth_monotone;
    if (s == "property_keyed") return MockLandscape::property_keyed;
    if (s == "deceptive") return MockLandscape::deceptive;
    throw error("unknown mock landscape: '" + s + "'");
}

MockBackend::MockBackend(MockProfile profile) : profile_(std::move(profile)) {
    if (profile_.catalyst_vocabulary.empty()) profile_.catalyst_vocabulary = kDefaultVocabulary;
    ActionTable table = ActionTable::defaults();
    if (profile_.include_vocabulary.empty()) profile_.include_vocabulary = table.include_properties();
    if (profile_.exclude_vocabulary.empty()) profile_.exclude_vocabulary = table.exclude_properties();
    profile_.target_subset_size =
        std::clamp<int>(profile_.target_subset_size, 1,
                        static_cast<int>(profile_.include_vocabulary.size()));
    max_tier_ = profile_.target_subset_size;

    // Seed-fixed target subset: rank include properties by hash, keep the
    // first target_subset_size.
    std::vector<std::string> ranked = profile_.include_vocabulary;
    std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
        auto ha = fnv1a64(a, hash_mix(profile_.seed, 0x7a72)); // "target" stream
        auto hb = fnv1a64(b, hash_mix(profile_.seed, 0x7a72));
        return ha != hb ? ha < hb : a < b;
    });
    target_props_.assign(ranked.begin(), ranked.begin() + profile_.target_subset_size);
}

int MockBackend::tier_of(const std::string& candidate) const {
    return static_cast<int>(fnv1a64(candidate, hash_mix(profile_.seed, 0x7469)) %
                            static_cast<std::uint64_t>(max_tier_ + 1));
}

int MockBackend::quality_of_prompt(const std::string& prompt) const {
    auto count_matches = [&](const std::vector<std::string>& vocab) {
        int n = 0;
        for (const auto& p : vocab)
            if (contains(prompt, p)) ++n;
        return n;
    };
    switch (profile_.landscape) {
        case MockLandscape::uniform:
            return 0;
        case MockLandscape::property_keyed:
            return std::min(count_matches(target_props_), max_tier_);
        case MockLandscape::deceptive: {
            int m = count_matches(target_props_);
            if (m == 0) return 1;
            if (m < 3) return 0;
            return std::min(m + 1, max_tier_);
        }
        case MockLandscape::depth_monotone: {
            int q = count_matches(profile_.include_vocabulary) +
                    count_matches(profile_.exclude_vocabulary);
            if (contains(prompt, "metal oxide ")) ++q;
            if (contains(prompt, "unary catalyst") || contains(prompt, "binary catalyst") ||
                contains(prompt, "trinary catalyst"))
                ++q;
            for (Relation r : kAllRelations)
                if (contains(prompt, relation_phrase(r))) {
                    ++q;
                    break;
                }
            return std::min(q, max_tier_);
        }
    }
    return 0;
}

std::string MockBackend::answer_reply(const CompletionRequest& request) const {
    const int k = std::max(1, parse_top_k(request.prompt, profile_.default_k));
    const int quality = quality_of_prompt(request.prompt);
    const std::uint64_t req_hash =
        fnv1a64(request.prompt, hash_mix(profile_.seed, request.salt));

    // Prefer names whose tier sits at the prompt's quality level; break ties
    // by per-request hash so different prompts see different orderings.
    std::vector<std::string> ranked = profile_.catalyst_vocabulary;
    std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
        int da = std::abs(tier_of(a) - quality);
        int db = std::abs(tier_of(b) - quality);
        if (da != db) return da < db;
        auto ha = fnv1a64(a, req_hash);
        auto hb = fnv1a64(b, req_hash);
        return ha != hb ? ha < hb : a < b;
    });

    std::string out = "Here are the top " + std::to_string(k) +
                      " candidates, as a list of pairs:\n";
    const int n = std::min<int>(k, static_cast<int>(ranked.size()));
    for (int i = 0; i < n; ++i) {
        const std::string& name = ranked[i];
        const char* why =
            kExplanations[fnv1a64(name, req_hash) % (sizeof kExplanations / sizeof *kExplanations)];
        out += std::to_string(i + 1) + ". " + name + ": " + why + ".\n";
    }
    return out;
}

std::string MockBackend::reward_reply(const CompletionRequest& request) const {
    std::vector<std::string> candidates = parse_reward_candidates(request.prompt);
    int count = parse_expected_count(request.prompt, static_cast<int>(candidates.size()));
    if (count <= 0) count = 1;
    const std::uint64_t req_hash =
        fnv1a64(request.prompt, hash_mix(profile_.seed, request.salt));

    std::string out = "[";
    for (int i = 0; i < count; ++i) {
        double magnitude = profile_.base_magnitude;
        if (i < static_cast<int>(candidates.size()))
            magnitude += profile_.tier_bonus * tier_of(candidates[i]);
        std::uint64_t na = hash_mix(req_hash, 2 * i);
        std::uint64_t nb = hash_mix(req_hash, 2 * i + 1);
        magnitude += profile_.noise * gauss(na, nb);
        magnitude = std::max(magnitude, 0.01);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", -magnitude); // adsorption energies are negative
        if (i) out += ", ";
        out += buf;
    }
    out += "]";
    return out;
}

std::string MockBackend::complete(const CompletionRequest& request) {
    if (request.prompt.empty()) throw malformed_response("mock backend received an empty prompt");
    return request.purpose == Purpose::reward ? reward_reply(request) : answer_reply(request);
}

nlohmann::json MockBackend::fingerprint() const {
    return nlohmann::json{{"kind", "mock"},
                          {"seed", profile_.seed},
                          {"landscape", to_string(profile_.landscape)},
                          {"noise", format_double17(profile_.noise)},
                          {"base_magnitude", format_double17(profile_.base_magnitude)},
                          {"tier_bonus", format_double17(profile_.tier_bonus)},
                          {"target_subset_size", profile_.target_subset_size},
                          {"vocabulary_size", profile_.catalyst_vocabulary.size()},
                          {"default_k", profile_.default_k}};
}

} // namespace mcr
