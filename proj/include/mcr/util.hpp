#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mcr {

// FNV-1a 64-bit. Used wherever a stable, platform-independent hash is needed
// (mock backend replies, cache keys, per-entry seed derivation). std::hash is
// deliberately avoided: its values are unspecified across implementations.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    // splitmix64 finalizer over the xor; cheap and well distributed
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
constexpr double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Decimal-preserving encoding for serialized statistics: 17 significant
// digits round-trip any IEEE-754 double exactly.
std::string format_double17(double v);
double parse_double17(const std::string& s); // throws malformed_document-agnostic std::invalid_argument

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool contains(std::string_view haystack, std::string_view needle);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split_lines(std::string_view text);

// Collapses runs of whitespace to single spaces and trims; used by tests and
// the mock backend when comparing or scanning rendered prompts.
std::string normalize_ws(std::string_view s);

} // namespace mcr
