#pragma once

// Test-only oracles: independent straight-line reimplementations used to pin
// expected values. These deliberately avoid the library's ranking, fusion,
// and traversal code paths; only the data types and the embedding provider
// are shared.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "agentroute/catalog.hpp"
#include "agentroute/embedding.hpp"
#include "agentroute/index.hpp"

namespace oracle {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Row of the consolidated candidate list used by the pipeline oracles.
struct Row {
    std::string node_id;
    bool is_tool = false;
    double similarity = 0.0;
    std::size_t ordinal = 0;
    int base_rank = 0;
    double fused = 0.0;
};

// Full-sort top-n over one corpus: similarity descending, ordinal ties.
inline std::vector<Row> corpus_top_n(
    const std::vector<agentroute::VectorIndex::Entry>& entries,
    const agentroute::EmbeddingVector& query, bool is_tool, std::size_t n) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Row row;
        row.node_id = entries[i].node_id;
        row.is_tool = is_tool;
        row.similarity = cosine(query.values, entries[i].vector.values);
        row.ordinal = i;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.ordinal < b.ordinal;
    });
    if (rows.size() > n) {
        rows.resize(n);
    }
    return rows;
}

struct Alg1Result {
    std::vector<std::string> agent_ids;
    std::vector<std::string> evidence_node_ids;
};

// The retrieval pipeline, written straight-line: dual top-N, consolidation
// (similarity desc, tool before agent, ordinal), base ranks, per-type
// weights, full sort, full walk mapping every entry to its agent, truncate
// to K at the end (no early exit).
inline Alg1Result alg1(const agentroute::KnowledgeGraph& graph,
                       const std::vector<agentroute::VectorIndex::Entry>& tool_entries,
                       const std::vector<agentroute::VectorIndex::Entry>& agent_entries,
                       const agentroute::EmbeddingVector& query, std::size_t k,
                       std::size_t n, double alpha_agent, double alpha_tool,
                       double rrf_k) {
    std::vector<Row> merged = corpus_top_n(tool_entries, query, true, n);
    std::vector<Row> agents = corpus_top_n(agent_entries, query, false, n);
    merged.insert(merged.end(), agents.begin(), agents.end());

    std::sort(merged.begin(), merged.end(), [](const Row& a, const Row& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        if (a.is_tool != b.is_tool) return a.is_tool;
        return a.ordinal < b.ordinal;
    });
    for (std::size_t i = 0; i < merged.size(); ++i) {
        merged[i].base_rank = static_cast<int>(i) + 1;
        merged[i].fused = (merged[i].is_tool ? alpha_tool : alpha_agent) /
                          (rrf_k + static_cast<double>(merged[i].base_rank));
    }
    std::sort(merged.begin(), merged.end(), [](const Row& a, const Row& b) {
        if (a.fused != b.fused) return a.fused > b.fused;
        return a.base_rank < b.base_rank;
    });

    Alg1Result result;
    std::set<std::string> seen;
    for (const Row& row : merged) {
        const std::string agent_id =
            row.is_tool ? graph.tool(row.node_id).parent_agent_id : row.node_id;
        if (seen.insert(agent_id).second) {
            result.agent_ids.push_back(agent_id);
            result.evidence_node_ids.push_back(row.node_id);
        }
    }
    if (result.agent_ids.size() > k) {
        result.agent_ids.resize(k);
        result.evidence_node_ids.resize(k);
    }
    return result;
}

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> pool = {
        "file",   "search",  "weather", "email",  "calendar", "database",
        "query",  "image",   "resize",  "music",  "playlist", "flight",
        "hotel",  "booking", "stock",   "price",  "news",     "translate",
        "code",   "review",  "deploy",  "backup", "chart",    "report",
        "invoice","payment", "map",     "route",  "video",    "caption"};
    return pool;
}

inline std::string random_text(std::mt19937& rng, int min_words, int max_words) {
    std::uniform_int_distribution<int> count_dist(min_words, max_words);
    std::uniform_int_distribution<std::size_t> word_dist(0, word_pool().size() - 1);
    const int count = count_dist(rng);
    std::string text;
    for (int i = 0; i < count; ++i) {
        if (!text.empty()) {
            text += " ";
        }
        text += word_pool()[word_dist(rng)];
    }
    return text;
}

// Random bipartite catalog: every tool gets a random parent, descriptions
// are drawn from a small pool so similarity ties actually occur.
inline agentroute::KnowledgeGraph random_catalog(std::mt19937& rng, int agent_count,
                                                 int tool_count) {
    std::vector<agentroute::AgentNode> agents;
    for (int i = 0; i < agent_count; ++i) {
        agentroute::AgentNode agent;
        agent.id = "agent:a" + std::to_string(i);
        agent.name = "a" + std::to_string(i);
        agent.description = random_text(rng, 1, 4);
        agents.push_back(std::move(agent));
    }
    std::uniform_int_distribution<int> parent_dist(0, agent_count - 1);
    std::vector<agentroute::ToolNode> tools;
    for (int i = 0; i < tool_count; ++i) {
        agentroute::ToolNode tool;
        tool.id = "tool:t" + std::to_string(i);
        tool.name = "t" + std::to_string(i);
        tool.description = random_text(rng, 1, 5);
        tool.parent_agent_id = "agent:a" + std::to_string(parent_dist(rng));
        tools.push_back(std::move(tool));
    }
    return agentroute::KnowledgeGraph::build(std::move(agents), std::move(tools));
}

} // namespace oracle
