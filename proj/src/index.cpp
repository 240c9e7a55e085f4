#include "agentroute/index.hpp"

#include <algorithm>
#include <cmath>

#include "agentroute/errors.hpp"

namespace agentroute {

VectorIndex::VectorIndex(NodeType corpus_type, std::string model_id,
                         std::size_t dim, std::vector<Entry> entries)
    : corpus_type_(corpus_type),
      model_id_(std::move(model_id)),
      dim_(dim),
      entries_(std::move(entries)) {
    for (const Entry& entry : entries_) {
        if (entry.vector.dim() != dim_) {
            throw Error("index entry '" + entry.node_id + "' has dim " +
                        std::to_string(entry.vector.dim()) + ", expected " +
                        std::to_string(dim_));
        }
    }
}

std::vector<Candidate> VectorIndex::top_n(const EmbeddingVector& query,
                                          std::size_t n) const {
    if (n == 0) {
        throw Error("top_n: n must be at least 1");
    }
    if (query.dim() != dim_) {
        throw Error("top_n: query dim " + std::to_string(query.dim()) +
                    " does not match index dim " + std::to_string(dim_));
    }
    if (!query.model_id.empty() && !model_id_.empty() &&
        query.model_id != model_id_) {
        throw Error("top_n: query model '" + query.model_id +
                    "' does not match index model '" + model_id_ + "'");
    }

    std::vector<Candidate> ranked;
    ranked.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        Candidate c;
        c.node_id = entries_[i].node_id;
        c.node_type = corpus_type_;
        c.similarity = cosine_similarity(query, entries_[i].vector);
        c.ingestion_ordinal = i;
        ranked.push_back(std::move(c));
    }

    std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
        if (a.similarity != b.similarity) {
            return a.similarity > b.similarity;
        }
        return a.ingestion_ordinal < b.ingestion_ordinal;
    });

    if (ranked.size() > n) {
        ranked.resize(n);
    }
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        ranked[i].corpus_rank = static_cast<int>(i) + 1;
    }
    return ranked;
}

VectorIndex build_index(const KnowledgeGraph& graph, EmbeddingProvider& provider,
                        NodeType corpus_type, const TextOptions& options) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    if (corpus_type == NodeType::Agent) {
        ids.reserve(graph.agent_count());
        texts.reserve(graph.agent_count());
        for (const AgentNode& agent : graph.agents()) {
            ids.push_back(agent.id);
            texts.push_back(node_text(agent, options));
        }
    } else {
        ids.reserve(graph.tool_count());
        texts.reserve(graph.tool_count());
        for (const ToolNode& tool : graph.tools()) {
            ids.push_back(tool.id);
            texts.push_back(node_text(tool, options));
        }
    }

    std::vector<VectorIndex::Entry> entries;
    entries.reserve(ids.size());
    constexpr std::size_t kChunk = 64;
    for (std::size_t start = 0; start < ids.size(); start += kChunk) {
        const std::size_t end = std::min(start + kChunk, ids.size());
        std::vector<std::string> chunk(texts.begin() + start, texts.begin() + end);
        std::vector<EmbeddingVector> vectors;
        try {
            vectors = provider.embed_batch(chunk);
        } catch (const ProviderError& e) {
            throw ProviderError("embedding failed for nodes '" + ids[start] +
                                    "'..'" + ids[end - 1] + "': " + e.what(),
                                e.retryable());
        }
        if (vectors.size() != chunk.size()) {
            throw ProviderError("provider returned " + std::to_string(vectors.size()) +
                                " vectors for " + std::to_string(chunk.size()) + " texts");
        }
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            entries.push_back({ids[start + i], std::move(vectors[i])});
        }
    }

    return VectorIndex(corpus_type, provider.model_id(), provider.dim(),
                       std::move(entries));
}

} // namespace agentroute
