#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentroute/catalog.hpp"
#include "agentroute/fusion.hpp"
#include "agentroute/index.hpp"
#include "agentroute/retrieval.hpp"

namespace agentroute {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    bool operator==(const Bm25Params&) const = default;
};

// Okapi BM25 over one corpus. Texts are tokenized with the shared
// lowercase/non-alphanumeric tokenizer; no stemming, no stopwords.
//
// score(D, q) = sum over query tokens t of
//   idf(t) * tf(t,D) * (k1 + 1) / (tf(t,D) + k1 * (1 - b + b * |D| / avgdl))
// with idf(t) = ln(1 + (N - df(t) + 0.5) / (df(t) + 0.5)), which keeps every
// term contribution nonnegative. Query tokens are scored with multiplicity.
class Bm25Index {
public:
    struct Doc {
        std::string node_id;
        std::map<std::string, int> term_counts;
        std::size_t length = 0;
    };

    Bm25Index() = default;

    static Bm25Index build(const KnowledgeGraph& graph, NodeType corpus_type,
                           Bm25Params params = {}, const TextOptions& options = {});
    static Bm25Index build_from_texts(
        const std::vector<std::pair<std::string, std::string>>& id_and_text,
        NodeType corpus_type, Bm25Params params = {});

    NodeType corpus_type() const { return corpus_type_; }
    const Bm25Params& params() const { return params_; }
    std::size_t size() const { return docs_.size(); }
    double average_doc_length() const { return avgdl_; }
    const std::vector<Doc>& docs() const { return docs_; }

    double score(const std::vector<std::string>& query_tokens,
                 std::size_t doc_index) const;

    // All documents scored against the query, descending; score ties broken
    // by ingestion ordinal. Empty (token-free) queries return no results.
    std::vector<std::pair<std::string, double>> ranked(const std::string& query) const;
    std::vector<std::pair<std::string, double>> top_k(const std::string& query,
                                                      std::size_t k) const;

private:
    NodeType corpus_type_ = NodeType::Agent;
    Bm25Params params_;
    std::vector<Doc> docs_;
    std::map<std::string, int> doc_frequency_;
    double avgdl_ = 0.0;
};

// Lightweight per-query result row shared by all baseline retrievers.
struct AgentHit {
    std::string agent_id;
    // Node that produced the hit (agent itself or an owned tool).
    NodeType evidence_type = NodeType::Agent;
    double score = 0.0;
};

// Dense retrieval over the agent corpus alone; no traversal.
std::vector<AgentHit> agent_only_retrieve(const VectorIndex& agent_index,
                                          const EmbeddingVector& query, std::size_t k);

// Dense retrieval over the tool corpus, owners traversed and deduplicated.
std::vector<AgentHit> tool_only_retrieve(const VectorIndex& tool_index,
                                         const KnowledgeGraph& graph,
                                         const EmbeddingVector& query,
                                         std::size_t k, std::size_t n);

// Standard weighted RRF baseline: each entity keeps its per-corpus rank and
// is scored alpha(corpus) / (k + corpus_rank); the combined list is sorted
// and traversed to agents. Differs from the type-conditioned pipeline in the
// rank basis (per-corpus vs consolidated global), so the two may order
// agents differently for the same weights.
std::vector<AgentHit> standard_wrrf_retrieve(const VectorIndex& tool_index,
                                             const VectorIndex& agent_index,
                                             const KnowledgeGraph& graph,
                                             const EmbeddingVector& query,
                                             const FusionConfig& config,
                                             std::size_t k, std::size_t n);

// BM25 hits resolved to agents (identity for the agent corpus, ownership
// traversal + dedup for the tool corpus).
std::vector<AgentHit> bm25_retrieve_agents(const Bm25Index& index,
                                           const KnowledgeGraph& graph,
                                           const std::string& query, std::size_t k);

} // namespace agentroute
