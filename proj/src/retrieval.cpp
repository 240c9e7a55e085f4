#include "agentroute/retrieval.hpp"

#include <algorithm>
#include <unordered_set>

#include "agentroute/errors.hpp"

namespace agentroute {

const char* to_string(QueryMode mode) {
    return mode == QueryMode::Direct ? "direct" : "stepwise";
}

QueryMode query_mode_from_string(std::string_view text) {
    if (text == "direct") {
        return QueryMode::Direct;
    }
    if (text == "stepwise") {
        return QueryMode::Stepwise;
    }
    throw ParseError("unknown query mode '" + std::string(text) + "'");
}

int default_top_n(int k) {
    return std::max(50, 10 * k);
}

void RetrievalRequest::validate() const {
    if (k < 1) {
        throw ConfigError("retrieval: k must be at least 1");
    }
    if (resolved_n() < k) {
        throw ConfigError("retrieval: n (" + std::to_string(resolved_n()) +
                          ") must be at least k (" + std::to_string(k) + ")");
    }
    fusion.validate();
    if (mode == QueryMode::Stepwise && steps.empty()) {
        throw ConfigError("retrieval: stepwise mode requires at least one step");
    }
}

Retriever::Retriever(std::shared_ptr<const KnowledgeGraph> graph,
                     std::shared_ptr<const VectorIndex> tool_index,
                     std::shared_ptr<const VectorIndex> agent_index,
                     std::shared_ptr<EmbeddingProvider> provider)
    : graph_(std::move(graph)),
      tool_index_(std::move(tool_index)),
      agent_index_(std::move(agent_index)),
      provider_(std::move(provider)) {}

std::vector<RankedAgent> traverse_to_agents(const KnowledgeGraph& graph,
                                            const std::vector<ScoredCandidate>& fused,
                                            std::size_t k) {
    std::vector<RankedAgent> agents;
    std::unordered_set<std::string> seen;
    for (const ScoredCandidate& entry : fused) {
        const std::string& agent_id =
            graph.owner_of(entry.candidate.node_id, entry.candidate.node_type);
        if (seen.insert(agent_id).second) {
            agents.push_back({agent_id, entry});
            if (agents.size() == k) {
                break;
            }
        }
    }
    return agents;
}

std::vector<RankedAgent> Retriever::rank_agents(const std::string& query_text,
                                                const RetrievalRequest& params) const {
    const std::size_t n = static_cast<std::size_t>(params.resolved_n());
    const EmbeddingVector query_vec = provider_->embed(query_text);

    std::vector<Candidate> merged;
    if (tool_index_->size() > 0) {
        std::vector<Candidate> tool_hits = tool_index_->top_n(query_vec, n);
        merged.insert(merged.end(), tool_hits.begin(), tool_hits.end());
    }
    if (agent_index_->size() > 0) {
        std::vector<Candidate> agent_hits = agent_index_->top_n(query_vec, n);
        merged.insert(merged.end(), agent_hits.begin(), agent_hits.end());
    }

    std::vector<ScoredCandidate> fused = type_weighted_rank(std::move(merged), params.fusion);
    return traverse_to_agents(*graph_, fused, static_cast<std::size_t>(params.k));
}

RetrievalResult Retriever::retrieve_direct(const RetrievalRequest& request) const {
    RetrievalResult result;
    if (tool_index_->size() == 0 && agent_index_->size() == 0) {
        result.catalog_empty = true;
        return result;
    }
    result.agents = rank_agents(request.query_text, request);
    return result;
}

RetrievalResult Retriever::retrieve_stepwise(const RetrievalRequest& request) const {
    RetrievalResult result;
    if (tool_index_->size() == 0 && agent_index_->size() == 0) {
        result.catalog_empty = true;
        return result;
    }

    result.per_step.reserve(request.steps.size());
    for (const std::string& step : request.steps) {
        result.per_step.push_back(rank_agents(step, request));
    }

    // Order-preserving union: steps in given order, agents within a step in
    // rank order, first occurrence wins, truncated to K.
    std::unordered_set<std::string> seen;
    for (const std::vector<RankedAgent>& step_agents : result.per_step) {
        for (const RankedAgent& agent : step_agents) {
            if (result.agents.size() == static_cast<std::size_t>(request.k)) {
                return result;
            }
            if (seen.insert(agent.agent_id).second) {
                result.agents.push_back(agent);
            }
        }
    }
    return result;
}

RetrievalResult Retriever::retrieve(const RetrievalRequest& request) const {
    request.validate();
    if (request.mode == QueryMode::Stepwise) {
        return retrieve_stepwise(request);
    }
    return retrieve_direct(request);
}

namespace {

using nlohmann::json;

json ranked_agent_to_json(const RankedAgent& agent) {
    return json{{"agent_id", agent.agent_id},
                {"evidence",
                 {{"node_id", agent.evidence.candidate.node_id},
                  {"node_type", to_string(agent.evidence.candidate.node_type)},
                  {"similarity", agent.evidence.candidate.similarity},
                  {"corpus_rank", agent.evidence.candidate.corpus_rank},
                  {"base_rank", agent.evidence.base_rank},
                  {"fused_score", agent.evidence.fused_score}}}};
}

} // namespace

nlohmann::json retrieval_request_to_json(const RetrievalRequest& request) {
    json doc{{"query_text", request.query_text},
             {"k", request.k},
             {"n", request.n},
             {"alpha_agent", request.fusion.alpha_agent},
             {"alpha_tool", request.fusion.alpha_tool},
             {"rrf_k", request.fusion.k},
             {"mode", to_string(request.mode)}};
    if (!request.steps.empty()) {
        doc["steps"] = request.steps;
    }
    return doc;
}

RetrievalRequest retrieval_request_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ParseError("retrieval request must be a JSON object");
    }
    RetrievalRequest request;
    if (doc.contains("query_text")) {
        request.query_text = doc.at("query_text").get<std::string>();
    } else if (doc.contains("query")) {
        request.query_text = doc.at("query").get<std::string>();
    } else {
        throw ParseError("retrieval request: missing 'query_text'");
    }
    request.k = doc.value("k", 5);
    request.n = doc.value("n", 0);
    request.fusion.alpha_agent = doc.value("alpha_agent", 1.0);
    request.fusion.alpha_tool = doc.value("alpha_tool", 1.0);
    request.fusion.k = doc.value("rrf_k", 60.0);
    if (doc.contains("steps")) {
        request.steps = doc.at("steps").get<std::vector<std::string>>();
    }
    if (doc.contains("mode")) {
        request.mode = query_mode_from_string(doc.at("mode").get<std::string>());
    } else if (!request.steps.empty()) {
        request.mode = QueryMode::Stepwise;
    }
    return request;
}

nlohmann::json retrieval_result_to_json(const RetrievalResult& result) {
    json agents = json::array();
    for (const RankedAgent& agent : result.agents) {
        agents.push_back(ranked_agent_to_json(agent));
    }
    json doc{{"agents", agents}, {"catalog_empty", result.catalog_empty}};
    if (!result.per_step.empty()) {
        json per_step = json::array();
        for (const std::vector<RankedAgent>& step : result.per_step) {
            json step_doc = json::array();
            for (const RankedAgent& agent : step) {
                step_doc.push_back(ranked_agent_to_json(agent));
            }
            per_step.push_back(std::move(step_doc));
        }
        doc["per_step"] = std::move(per_step);
    }
    return doc;
}

} // namespace agentroute
