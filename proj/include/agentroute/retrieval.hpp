#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "agentroute/catalog.hpp"
#include "agentroute/embedding.hpp"
#include "agentroute/fusion.hpp"
#include "agentroute/index.hpp"

namespace agentroute {

enum class QueryMode { Direct, Stepwise };

const char* to_string(QueryMode mode);
QueryMode query_mode_from_string(std::string_view text);

// Default per-corpus cutoff: wide enough that traversal does not starve when
// many top tools share a parent.
int default_top_n(int k);

struct RetrievalRequest {
    std::string query_text;
    // Final number of unique agents.
    int k = 5;
    // Per-corpus retrieval cutoff; 0 resolves to default_top_n(k).
    int n = 0;
    FusionConfig fusion;
    QueryMode mode = QueryMode::Direct;
    // Sub-task texts for stepwise mode.
    std::vector<std::string> steps;

    int resolved_n() const { return n > 0 ? n : default_top_n(k); }

    // Throws ConfigError on k < 1, n < k, or stepwise mode without steps.
    void validate() const;
};

struct RankedAgent {
    std::string agent_id;
    // The fused candidate that introduced this agent: the agent node itself,
    // or the owned tool that was traversed to it.
    ScoredCandidate evidence;
};

struct RetrievalResult {
    std::vector<RankedAgent> agents;
    // One entry per step in stepwise mode; empty for direct queries.
    std::vector<std::vector<RankedAgent>> per_step;
    // Set when the catalog had no nodes to search.
    bool catalog_empty = false;
};

// Read-only retrieval pipeline over an immutable graph + index snapshot;
// safe for concurrent requests.
//
// For each query: top-N from both corpora, consolidation into a single
// candidate list with global base ranks, type-conditioned weighted RRF, and
// a walk of the fused list mapping each entry to its agent (identity for
// agent nodes, ownership edge for tools) collecting first occurrences until
// K agents are found. Fewer than K are returned when the fused list holds
// fewer unique agents; results are never padded.
class Retriever {
public:
    Retriever(std::shared_ptr<const KnowledgeGraph> graph,
              std::shared_ptr<const VectorIndex> tool_index,
              std::shared_ptr<const VectorIndex> agent_index,
              std::shared_ptr<EmbeddingProvider> provider);

    // Dispatches on request.mode.
    RetrievalResult retrieve(const RetrievalRequest& request) const;

    // Single-query retrieval with the request's parameters, ignoring mode
    // and steps.
    std::vector<RankedAgent> rank_agents(const std::string& query_text,
                                         const RetrievalRequest& params) const;

    const KnowledgeGraph& graph() const { return *graph_; }
    const VectorIndex& tool_index() const { return *tool_index_; }
    const VectorIndex& agent_index() const { return *agent_index_; }
    EmbeddingProvider& provider() const { return *provider_; }

private:
    RetrievalResult retrieve_direct(const RetrievalRequest& request) const;
    RetrievalResult retrieve_stepwise(const RetrievalRequest& request) const;

    std::shared_ptr<const KnowledgeGraph> graph_;
    std::shared_ptr<const VectorIndex> tool_index_;
    std::shared_ptr<const VectorIndex> agent_index_;
    std::shared_ptr<EmbeddingProvider> provider_;
};

// Maps a fused candidate list to the final agent list (Retriever's traversal
// step, exposed for the baselines that share it).
std::vector<RankedAgent> traverse_to_agents(const KnowledgeGraph& graph,
                                            const std::vector<ScoredCandidate>& fused,
                                            std::size_t k);

// Wire format shared by the CLI and the HTTP service.
nlohmann::json retrieval_request_to_json(const RetrievalRequest& request);
RetrievalRequest retrieval_request_from_json(const nlohmann::json& doc);
nlohmann::json retrieval_result_to_json(const RetrievalResult& result);

} // namespace agentroute
