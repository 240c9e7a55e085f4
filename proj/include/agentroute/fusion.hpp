#pragma once

#include <span>
#include <vector>

#include "agentroute/index.hpp"

namespace agentroute {

// Damping constant and per-type weights for rank fusion.
struct FusionConfig {
    double k = 60.0;
    double alpha_agent = 1.0;
    double alpha_tool = 1.0;

    // Throws ConfigError unless k > 0, both alphas >= 0, and at least one
    // alpha is positive.
    void validate() const;

    double alpha_for(NodeType type) const {
        return type == NodeType::Agent ? alpha_agent : alpha_tool;
    }

    bool operator==(const FusionConfig&) const = default;
};

// Reciprocal rank fusion of one entity retrieved by several methods:
// sum over methods of 1 / (k + rank). Throws Error on an empty rank list.
double rrf_score(std::span<const int> ranks, double k);

struct WeightedRank {
    int rank = 1;
    double alpha = 1.0;
};

// Weighted variant: sum of alpha / (k + rank) over the entity's per-method
// (rank, weight) pairs.
double wrrf_score(std::span<const WeightedRank> entries, double k);

struct ScoredCandidate {
    Candidate candidate;
    // Global 1-based rank in the consolidated candidate list.
    int base_rank = 0;
    double fused_score = 0.0;
};

// Consolidates a merged tool+agent candidate list and assigns each entity a
// global base rank: candidates sorted by similarity descending, similarity
// ties broken by tool-before-agent and then by smaller ingestion ordinal.
// Throws Error if a node id appears twice.
std::vector<ScoredCandidate> assign_base_ranks(std::vector<Candidate> merged);

// Type-conditioned weighted RRF: every consolidated candidate is scored
// alpha(type) / (k + base_rank) and the list is re-sorted by that score,
// score ties broken by smaller base rank. With equal alphas the output
// order equals the base-rank order, and candidates of one type always keep
// their relative order (shared denominator).
std::vector<ScoredCandidate> type_weighted_rank(std::vector<Candidate> merged,
                                                const FusionConfig& config);

// Rescores candidates that already carry base ranks; used by the retrieval
// pipeline and kept separate so tests can drive it with explicit ranks.
void apply_type_weights(std::vector<ScoredCandidate>& consolidated,
                        const FusionConfig& config);

} // namespace agentroute
