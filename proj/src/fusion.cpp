#include "agentroute/fusion.hpp"

#include <algorithm>
#include <unordered_set>

#include "agentroute/errors.hpp"

namespace agentroute {

void FusionConfig::validate() const {
    if (!(k > 0.0)) {
        throw ConfigError("fusion: k must be positive");
    }
    if (alpha_agent < 0.0 || alpha_tool < 0.0) {
        throw ConfigError("fusion: weights must be nonnegative");
    }
    if (alpha_agent == 0.0 && alpha_tool == 0.0) {
        throw ConfigError("fusion: at least one weight must be positive");
    }
}

double rrf_score(std::span<const int> ranks, double k) {
    if (ranks.empty()) {
        throw Error("rrf_score: entity retrieved by no method");
    }
    if (!(k > 0.0)) {
        throw ConfigError("rrf_score: k must be positive");
    }
    double score = 0.0;
    for (int rank : ranks) {
        if (rank < 1) {
            throw Error("rrf_score: ranks are 1-based");
        }
        score += 1.0 / (k + static_cast<double>(rank));
    }
    return score;
}

double wrrf_score(std::span<const WeightedRank> entries, double k) {
    if (entries.empty()) {
        throw Error("wrrf_score: entity retrieved by no method");
    }
    if (!(k > 0.0)) {
        throw ConfigError("wrrf_score: k must be positive");
    }
    double score = 0.0;
    for (const WeightedRank& entry : entries) {
        if (entry.rank < 1) {
            throw Error("wrrf_score: ranks are 1-based");
        }
        if (entry.alpha < 0.0) {
            throw Error("wrrf_score: weights must be nonnegative");
        }
        score += entry.alpha / (k + static_cast<double>(entry.rank));
    }
    return score;
}

std::vector<ScoredCandidate> assign_base_ranks(std::vector<Candidate> merged) {
    std::unordered_set<std::string> seen;
    seen.reserve(merged.size());
    for (const Candidate& c : merged) {
        if (!seen.insert(c.node_id).second) {
            throw Error("assign_base_ranks: duplicate node id '" + c.node_id + "'");
        }
    }

    std::sort(merged.begin(), merged.end(), [](const Candidate& a, const Candidate& b) {
        if (a.similarity != b.similarity) {
            return a.similarity > b.similarity;
        }
        if (a.node_type != b.node_type) {
            return a.node_type == NodeType::Tool;
        }
        return a.ingestion_ordinal < b.ingestion_ordinal;
    });

    std::vector<ScoredCandidate> consolidated;
    consolidated.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        ScoredCandidate sc;
        sc.candidate = std::move(merged[i]);
        sc.base_rank = static_cast<int>(i) + 1;
        consolidated.push_back(std::move(sc));
    }
    return consolidated;
}

void apply_type_weights(std::vector<ScoredCandidate>& consolidated,
                        const FusionConfig& config) {
    config.validate();
    for (ScoredCandidate& sc : consolidated) {
        sc.fused_score = config.alpha_for(sc.candidate.node_type) /
                         (config.k + static_cast<double>(sc.base_rank));
    }
    std::sort(consolidated.begin(), consolidated.end(),
              [](const ScoredCandidate& a, const ScoredCandidate& b) {
                  if (a.fused_score != b.fused_score) {
                      return a.fused_score > b.fused_score;
                  }
                  return a.base_rank < b.base_rank;
              });
}

std::vector<ScoredCandidate> type_weighted_rank(std::vector<Candidate> merged,
                                                const FusionConfig& config) {
    config.validate();
    std::vector<ScoredCandidate> consolidated = assign_base_ranks(std::move(merged));
    apply_type_weights(consolidated, config);
    return consolidated;
}

} // namespace agentroute
