#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "agentroute/catalog.hpp"
#include "agentroute/embedding.hpp"

namespace agentroute {

// A node retrieved from one corpus index.
struct Candidate {
    std::string node_id;
    NodeType node_type = NodeType::Tool;
    double similarity = 0.0;
    // 1-based, dense rank within the list it was retrieved from.
    int corpus_rank = 0;
    // Position in the corpus ingestion order; the deterministic tie-breaker.
    std::size_t ingestion_ordinal = 0;
};

// Exact (brute-force) vector index over one corpus. Entries follow the
// corpus ingestion order. Immutable after build; top_n is reentrant.
class VectorIndex {
public:
    struct Entry {
        std::string node_id;
        EmbeddingVector vector;
    };

    VectorIndex() = default;
    VectorIndex(NodeType corpus_type, std::string model_id, std::size_t dim,
                std::vector<Entry> entries);

    NodeType corpus_type() const { return corpus_type_; }
    const std::string& model_id() const { return model_id_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    // Top-n candidates by cosine similarity, descending; similarity ties
    // broken by smaller ingestion ordinal. Returns the truncation of the
    // fully sorted corpus, so top_n is always a prefix of top_m for n <= m.
    std::vector<Candidate> top_n(const EmbeddingVector& query, std::size_t n) const;

private:
    NodeType corpus_type_ = NodeType::Tool;
    std::string model_id_;
    std::size_t dim_ = 0;
    std::vector<Entry> entries_;
};

// Embeds every node of the chosen corpus, in ingestion order. Provider
// failures are rethrown naming the nodes being embedded.
VectorIndex build_index(const KnowledgeGraph& graph, EmbeddingProvider& provider,
                        NodeType corpus_type, const TextOptions& options = {});

} // namespace agentroute
