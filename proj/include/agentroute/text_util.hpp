#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace agentroute {

std::string to_lower(std::string_view text);

// Strip leading/trailing ASCII whitespace.
std::string trim(std::string_view text);

// Lowercase and split on every non-alphanumeric character. Shared by the
// hashed embedding provider and the BM25 tokenizer so lexical and dense
// baselines see the same token stream.
std::vector<std::string> tokenize_lower(std::string_view text);

// FNV-1a 64-bit. Used instead of std::hash so hashes are stable across
// platforms and library versions.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// splitmix64 finalizer; decorrelates values derived from one hash.
std::uint64_t mix64(std::uint64_t x);

// 128-bit content digest as 32 hex chars (two independent FNV-1a streams).
// Collision-safe enough for cache keys and container fingerprints.
std::string content_hash_hex(std::string_view data);

} // namespace agentroute
