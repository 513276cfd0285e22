#include "mcr/reward.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <regex>

namespace mcr {

std::string build_reward_prompt(const std::string& adsorbate,
                                const std::vector<std::string>& candidates) {
    if (candidates.empty()) throw empty_candidate_list("reward prompt needs at least one candidate");
    return "Generate a list of adsorption energies, in eV, for the adsorbate " + adsorbate +
           " to the surface of each of the following catalysts: " + join(candidates, ", ") +
           ". Return the adsorption energies as a list of only " +
           std::to_string(candidates.size()) + " numbers in the order specified.";
}

namespace {

bool is_digit_at(const std::string& s, std::size_t i) {
    return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
}

bool is_wordlike(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Replaces the UTF-8 minus sign some models emit with ASCII '-'.
std::string normalize_minus(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x88 &&
            static_cast<unsigned char>(text[i + 2]) == 0x92) {
            out += '-';
            i += 2;
        } else {
            out += text[i];
        }
    }
    return out;
}

// A line-start "3." or "7)" is an item index, not a value, whenever the rest
// of the line carries another number (or the line is the bare index).
std::string strip_bullet_index(const std::string& line, bool* had_number_after);

std::vector<double> scan_numbers(const std::string& line) {
    std::vector<double> out;
    const std::size_t n = line.size();
    std::size_t i = 0;
    while (i < n) {
        char c = line[i];
        if (is_wordlike(c)) {
            // Skip whole word-like runs so digits embedded in tokens such as
            // CO2 or TiO2 never parse as values.
            if (std::isdigit(static_cast<unsigned char>(c)) &&
                (i == 0 || !is_wordlike(line[i - 1]))) {
                // fall through: digit starting a fresh token starts a number
            } else {
                ++i;
                continue;
            }
        }
        std::size_t start = i;
        std::size_t j = i;
        if (line[j] == '+' || line[j] == '-') {
            if (j > 0 && is_wordlike(line[j - 1])) {
                ++i;
                continue;
            }
            ++j;
            if (!is_digit_at(line, j) && !(j < n && line[j] == '.' && is_digit_at(line, j + 1))) {
                ++i;
                continue;
            }
        } else if (line[j] == '.') {
            if (!is_digit_at(line, j + 1) || (j > 0 && is_wordlike(line[j - 1]))) {
                ++i;
                continue;
            }
        } else if (!std::isdigit(static_cast<unsigned char>(line[j]))) {
            ++i;
            continue;
        }

        while (is_digit_at(line, j)) ++j;
        if (j < n && line[j] == '.' && is_digit_at(line, j + 1)) {
            ++j;
            while (is_digit_at(line, j)) ++j;
        }
        if (j < n && (line[j] == 'e' || line[j] == 'E')) {
            std::size_t e = j + 1;
            if (e < n && (line[e] == '+' || line[e] == '-')) ++e;
            if (is_digit_at(line, e)) {
                while (is_digit_at(line, e)) ++e;
                j = e;
            }
        }
        out.push_back(std::strtod(line.substr(start, j - start).c_str(), nullptr));
        i = j;
    }
    return out;
}

std::string strip_bullet_index(const std::string& line, bool* bare_bullet) {
    *bare_bullet = false;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t d = i;
    while (is_digit_at(line, d)) ++d;
    if (d == i || d >= line.size()) return line;
    if (line[d] != '.' && line[d] != ')') return line;
    std::size_t rest = d + 1;
    if (rest < line.size() && !std::isspace(static_cast<unsigned char>(line[rest]))) return line;
    std::string tail = line.substr(rest);
    if (trim(tail).empty()) {
        *bare_bullet = true;
        return "";
    }
    if (scan_numbers(tail).empty()) return line; // "3. Pt" keeps its index? no number follows,
                                                 // so nothing to protect; keep the line intact
    return tail;
}

} // namespace

std::vector<double> parse_energy_list(const std::string& text, std::size_t expected_len) {
    if (expected_len < 1) throw parse_failure("expected_len must be at least 1");
    std::vector<double> values;
    for (const std::string& raw : split_lines(normalize_minus(text))) {
        bool bare_bullet = false;
        std::string line = strip_bullet_index(raw, &bare_bullet);
        if (bare_bullet) continue;
        for (double v : scan_numbers(line)) values.push_back(v);
    }
    if (values.size() != expected_len)
        throw parse_failure("expected " + std::to_string(expected_len) + " numbers, found " +
                            std::to_string(values.size()));
    return values;
}

RewardEvaluation compute_reward(Environment& env, const std::vector<std::string>& adsorbates,
                                const std::vector<std::string>& candidates, std::uint64_t salt) {
    if (adsorbates.empty()) throw error("compute_reward needs at least one adsorbate");
    if (candidates.empty()) throw empty_candidate_list("compute_reward needs candidates");

    RewardEvaluation ev;
    for (const std::string& adsorbate : adsorbates) {
        const std::string prompt = build_reward_prompt(adsorbate, candidates);
        AdsorbateEnergies entry;
        entry.adsorbate = adsorbate;
        bool parsed = false;
        std::string last_failure;
        for (int attempt = 0; attempt < 3 && !parsed; ++attempt) {
            entry.raw_reply = env.complete(Purpose::reward, prompt, salt, attempt);
            try {
                entry.energies = parse_energy_list(entry.raw_reply, candidates.size());
                parsed = true;
            } catch (const parse_failure& e) {
                last_failure = e.what();
            }
        }
        if (!parsed)
            throw reward_unavailable("no parseable energy list for adsorbate " + adsorbate +
                                     " after 3 attempts: " + last_failure);
        double sum = 0;
        for (double e : entry.energies) sum += std::fabs(e);
        entry.mean_abs = sum / static_cast<double>(entry.energies.size());
        ev.total += entry.mean_abs;
        ev.per_adsorbate.push_back(std::move(entry));
    }
    return ev;
}

namespace {

// Cuts an item body down to the candidate name: everything before the first
// colon, spaced dash, opening parenthesis, or explanation clause.
std::string name_of_item(const std::string& item) {
    static const char* kSeparators[] = {":", " - ", " -- ", "\xE2\x80\x93", "\xE2\x80\x94",
                                        " (", ", because", ", due to", ", as ", ", which"};
    std::size_t cut = item.size();
    for (const char* sep : kSeparators) {
        std::size_t pos = item.find(sep);
        if (pos != std::string::npos) cut = std::min(cut, pos);
    }
    std::string name = trim(item.substr(0, cut));
    // strip markdown emphasis and quoting
    auto strip_wrap = [&](const char* open, const char* close) {
        if (name.size() > std::strlen(open) + std::strlen(close) && name.starts_with(open) &&
            name.ends_with(close))
            name = trim(name.substr(std::strlen(open),
                                    name.size() - std::strlen(open) - std::strlen(close)));
    };
    strip_wrap("**", "**");
    strip_wrap("*", "*");
    strip_wrap("\"", "\"");
    strip_wrap("'", "'");
    strip_wrap("[", "]");
    if (name.starts_with("and ")) name = trim(name.substr(4));
    while (!name.empty() && (name.back() == '.' || name.back() == ','))
        name = trim(name.substr(0, name.size() - 1));
    return name;
}

void push_unique(std::vector<std::string>& names, std::string name) {
    if (name.empty() || name.size() > 80) return;
    if (std::find(names.begin(), names.end(), name) != names.end()) return;
    names.push_back(std::move(name));
}

} // namespace

std::vector<std::string> parse_candidates(const std::string& answer_text, std::size_t k) {
    if (k < 1) throw no_candidates_found("k must be at least 1");
    std::vector<std::string> names;

    // Pass 1: numbered or bulleted lines.
    for (const std::string& raw : split_lines(answer_text)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        std::size_t i = 0;
        bool is_item = false;
        while (is_digit_at(line, i)) ++i;
        if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
            is_item = true;
            ++i;
        } else if (line[0] == '-' || line[0] == '*') {
            // a dash bullet, not a negative number or emphasis
            if (line.size() > 1 && line[1] == ' ') {
                is_item = true;
                i = 1;
            }
        } else if (line.starts_with("\xE2\x80\xA2")) { // "•"
            is_item = true;
            i = 3;
        }
        if (is_item) push_unique(names, name_of_item(trim(line.substr(i))));
    }

    // Pass 2: "(name, explanation)" pairs.
    if (names.empty()) {
        static const std::regex pair_re(R"(\(\s*([^,()]+?)\s*,[^)]*\))");
        for (auto it = std::sregex_iterator(answer_text.begin(), answer_text.end(), pair_re);
             it != std::sregex_iterator(); ++it)
            push_unique(names, name_of_item((*it)[1].str()));
    }

    // Pass 3: a plain comma list, possibly after a lead-in clause.
    if (names.empty() && answer_text.find(',') != std::string::npos) {
        std::string body = trim(answer_text);
        std::size_t colon = body.rfind(':');
        if (colon != std::string::npos) body = trim(body.substr(colon + 1));
        else {
            std::size_t are = body.find(" are ");
            if (are != std::string::npos) body = trim(body.substr(are + 5));
        }
        std::size_t from = 0;
        while (from <= body.size()) {
            std::size_t comma = body.find(',', from);
            std::string piece =
                comma == std::string::npos ? body.substr(from) : body.substr(from, comma - from);
            push_unique(names, name_of_item(trim(piece)));
            if (comma == std::string::npos) break;
            from = comma + 1;
        }
    }

    if (names.empty()) throw no_candidates_found("no catalyst names recoverable from answer");
    if (names.size() > k) names.resize(k);
    return names;
}

} // namespace mcr
