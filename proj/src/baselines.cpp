#include "agentroute/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "agentroute/errors.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

Bm25Index Bm25Index::build(const KnowledgeGraph& graph, NodeType corpus_type,
                           Bm25Params params, const TextOptions& options) {
    std::vector<std::pair<std::string, std::string>> id_and_text;
    if (corpus_type == NodeType::Agent) {
        id_and_text.reserve(graph.agent_count());
        for (const AgentNode& agent : graph.agents()) {
            id_and_text.emplace_back(agent.id, node_text(agent, options));
        }
    } else {
        id_and_text.reserve(graph.tool_count());
        for (const ToolNode& tool : graph.tools()) {
            id_and_text.emplace_back(tool.id, node_text(tool, options));
        }
    }
    return build_from_texts(id_and_text, corpus_type, params);
}

Bm25Index Bm25Index::build_from_texts(
    const std::vector<std::pair<std::string, std::string>>& id_and_text,
    NodeType corpus_type, Bm25Params params) {
    if (!(params.k1 >= 0.0) || !(params.b >= 0.0) || params.b > 1.0) {
        throw ConfigError("bm25: require k1 >= 0 and 0 <= b <= 1");
    }
    Bm25Index index;
    index.corpus_type_ = corpus_type;
    index.params_ = params;

    std::size_t total_length = 0;
    for (const auto& [id, text] : id_and_text) {
        Doc doc;
        doc.node_id = id;
        for (const std::string& token : tokenize_lower(text)) {
            ++doc.term_counts[token];
            ++doc.length;
        }
        total_length += doc.length;
        for (const auto& [term, count] : doc.term_counts) {
            ++index.doc_frequency_[term];
        }
        index.docs_.push_back(std::move(doc));
    }
    index.avgdl_ = index.docs_.empty()
                       ? 0.0
                       : static_cast<double>(total_length) /
                             static_cast<double>(index.docs_.size());
    return index;
}

double Bm25Index::score(const std::vector<std::string>& query_tokens,
                        std::size_t doc_index) const {
    const Doc& doc = docs_.at(doc_index);
    const double n_docs = static_cast<double>(docs_.size());
    double total = 0.0;
    for (const std::string& token : query_tokens) {
        auto tf_it = doc.term_counts.find(token);
        if (tf_it == doc.term_counts.end()) {
            continue;
        }
        const double tf = static_cast<double>(tf_it->second);
        auto df_it = doc_frequency_.find(token);
        const double df = df_it == doc_frequency_.end()
                              ? 0.0
                              : static_cast<double>(df_it->second);
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        const double norm =
            avgdl_ > 0.0 ? static_cast<double>(doc.length) / avgdl_ : 0.0;
        total += idf * tf * (params_.k1 + 1.0) /
                 (tf + params_.k1 * (1.0 - params_.b + params_.b * norm));
    }
    return total;
}

std::vector<std::pair<std::string, double>> Bm25Index::ranked(
    const std::string& query) const {
    const std::vector<std::string> tokens = tokenize_lower(query);
    if (tokens.empty()) {
        return {};
    }
    std::vector<std::size_t> order(docs_.size());
    std::vector<double> scores(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        order[i] = i;
        scores[i] = score(tokens, i);
    }
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    std::vector<std::pair<std::string, double>> out;
    out.reserve(order.size());
    for (std::size_t i : order) {
        out.emplace_back(docs_[i].node_id, scores[i]);
    }
    return out;
}

std::vector<std::pair<std::string, double>> Bm25Index::top_k(
    const std::string& query, std::size_t k) const {
    std::vector<std::pair<std::string, double>> out = ranked(query);
    if (out.size() > k) {
        out.resize(k);
    }
    return out;
}

std::vector<AgentHit> agent_only_retrieve(const VectorIndex& agent_index,
                                          const EmbeddingVector& query,
                                          std::size_t k) {
    if (agent_index.size() == 0) {
        return {};
    }
    std::vector<AgentHit> hits;
    for (const Candidate& c : agent_index.top_n(query, k)) {
        hits.push_back({c.node_id, NodeType::Agent, c.similarity});
    }
    return hits;
}

std::vector<AgentHit> tool_only_retrieve(const VectorIndex& tool_index,
                                         const KnowledgeGraph& graph,
                                         const EmbeddingVector& query,
                                         std::size_t k, std::size_t n) {
    if (tool_index.size() == 0) {
        return {};
    }
    std::vector<AgentHit> hits;
    std::unordered_set<std::string> seen;
    for (const Candidate& c : tool_index.top_n(query, n)) {
        const std::string& agent_id = graph.owner_of(c.node_id, NodeType::Tool);
        if (seen.insert(agent_id).second) {
            hits.push_back({agent_id, NodeType::Tool, c.similarity});
            if (hits.size() == k) {
                break;
            }
        }
    }
    return hits;
}

std::vector<AgentHit> standard_wrrf_retrieve(const VectorIndex& tool_index,
                                             const VectorIndex& agent_index,
                                             const KnowledgeGraph& graph,
                                             const EmbeddingVector& query,
                                             const FusionConfig& config,
                                             std::size_t k, std::size_t n) {
    config.validate();

    struct Entry {
        Candidate candidate;
        double score = 0.0;
    };
    std::vector<Entry> entries;
    if (tool_index.size() > 0) {
        for (Candidate& c : tool_index.top_n(query, n)) {
            const double score =
                config.alpha_tool / (config.k + static_cast<double>(c.corpus_rank));
            entries.push_back({std::move(c), score});
        }
    }
    if (agent_index.size() > 0) {
        for (Candidate& c : agent_index.top_n(query, n)) {
            const double score =
                config.alpha_agent / (config.k + static_cast<double>(c.corpus_rank));
            entries.push_back({std::move(c), score});
        }
    }

    // Score ties across the two lists are resolved like consolidation ties:
    // higher similarity, then tool before agent, then ingestion ordinal.
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.candidate.similarity != b.candidate.similarity) {
            return a.candidate.similarity > b.candidate.similarity;
        }
        if (a.candidate.node_type != b.candidate.node_type) {
            return a.candidate.node_type == NodeType::Tool;
        }
        return a.candidate.ingestion_ordinal < b.candidate.ingestion_ordinal;
    });

    std::vector<AgentHit> hits;
    std::unordered_set<std::string> seen;
    for (const Entry& entry : entries) {
        const std::string& agent_id =
            graph.owner_of(entry.candidate.node_id, entry.candidate.node_type);
        if (seen.insert(agent_id).second) {
            hits.push_back({agent_id, entry.candidate.node_type, entry.score});
            if (hits.size() == k) {
                break;
            }
        }
    }
    return hits;
}

std::vector<AgentHit> bm25_retrieve_agents(const Bm25Index& index,
                                           const KnowledgeGraph& graph,
                                           const std::string& query,
                                           std::size_t k) {
    std::vector<AgentHit> hits;
    std::unordered_set<std::string> seen;
    for (const auto& [node_id, score] : index.ranked(query)) {
        const std::string& agent_id = graph.owner_of(node_id, index.corpus_type());
        if (seen.insert(agent_id).second) {
            hits.push_back({agent_id, index.corpus_type(), score});
            if (hits.size() == k) {
                break;
            }
        }
    }
    return hits;
}

} // namespace agentroute
