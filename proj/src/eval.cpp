#include "agentroute/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <thread>

#include "agentroute/errors.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& value, const std::string& where) {
    std::vector<std::string> out;
    if (!value.is_array()) {
        throw ParseError("dataset: expected an array of strings in " + where);
    }
    for (const json& item : value) {
        if (!item.is_string()) {
            throw ParseError("dataset: expected strings in " + where);
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

} // namespace

std::vector<EvalQuery> dataset_from_json(const nlohmann::json& doc) {
    const json* records = nullptr;
    if (doc.is_array()) {
        records = &doc;
    } else if (doc.is_object() && doc.contains("queries") && doc["queries"].is_array()) {
        records = &doc["queries"];
    } else {
        throw ParseError("dataset: expected an array or an object with a 'queries' array");
    }

    std::vector<EvalQuery> dataset;
    std::size_t index = 0;
    for (const json& rec : *records) {
        if (!rec.is_object()) {
            throw ParseError("dataset: record #" + std::to_string(index) +
                             " is not an object");
        }
        EvalQuery query;
        query.id = rec.contains("id") ? rec["id"].get<std::string>()
                                      : "q" + std::to_string(index);
        if (!rec.contains("question") || !rec["question"].is_string()) {
            throw ParseError("dataset: record '" + query.id +
                             "' is missing a 'question' string");
        }
        query.question = rec["question"].get<std::string>();
        if (rec.contains("steps")) {
            query.steps = string_array(rec["steps"], "record '" + query.id + "' steps");
        }
        if (rec.contains("relevant_agents")) {
            query.relevant_agents = string_array(
                rec["relevant_agents"], "record '" + query.id + "' relevant_agents");
        }
        if (rec.contains("relevant_agents_per_step")) {
            const json& per_step = rec["relevant_agents_per_step"];
            if (!per_step.is_array()) {
                throw ParseError("dataset: record '" + query.id +
                                 "' relevant_agents_per_step must be an array");
            }
            for (const json& step_set : per_step) {
                query.relevant_per_step.push_back(string_array(
                    step_set, "record '" + query.id + "' relevant_agents_per_step"));
            }
        }
        dataset.push_back(std::move(query));
        ++index;
    }
    return dataset;
}

std::vector<EvalQuery> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dataset '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("dataset '" + path.string() + "': " + e.what());
    }
    return dataset_from_json(doc);
}

nlohmann::json dataset_to_json(const std::vector<EvalQuery>& dataset) {
    json queries = json::array();
    for (const EvalQuery& query : dataset) {
        json rec{{"id", query.id},
                 {"question", query.question},
                 {"steps", query.steps},
                 {"relevant_agents", query.relevant_agents}};
        if (!query.relevant_per_step.empty()) {
            rec["relevant_agents_per_step"] = query.relevant_per_step;
        }
        queries.push_back(std::move(rec));
    }
    return json{{"queries", queries}};
}

void validate_dataset(const std::vector<EvalQuery>& dataset,
                      const KnowledgeGraph& graph) {
    for (const EvalQuery& query : dataset) {
        if (query.relevant_agents.empty()) {
            throw ValidationError("dataset: query '" + query.id +
                                  "' has no ground-truth agents");
        }
        for (const std::string& agent_id : query.relevant_agents) {
            if (!graph.has_agent(agent_id)) {
                throw ValidationError("dataset: query '" + query.id +
                                      "' references unknown agent '" + agent_id + "'");
            }
        }
        if (!query.relevant_per_step.empty() &&
            query.relevant_per_step.size() != query.steps.size()) {
            throw ValidationError("dataset: query '" + query.id + "' has " +
                                  std::to_string(query.relevant_per_step.size()) +
                                  " per-step ground-truth sets for " +
                                  std::to_string(query.steps.size()) + " steps");
        }
        for (const auto& step_set : query.relevant_per_step) {
            for (const std::string& agent_id : step_set) {
                if (!graph.has_agent(agent_id)) {
                    throw ValidationError("dataset: query '" + query.id +
                                          "' references unknown agent '" + agent_id +
                                          "' in a step");
                }
            }
        }
    }
}

namespace {

// Field aliases tried, in order, when mapping external benchmark records.
const char* const kIdKeys[] = {"id", "question_id", "task_id", "qid"};
const char* const kQuestionKeys[] = {"question", "query", "task", "instruction", "prompt"};
const char* const kStepsKeys[] = {"steps", "sub_questions", "substeps", "decomposition"};
const char* const kStepTextKeys[] = {"step", "description", "sub_question",
                                     "sub_task", "query", "text", "instruction"};
const char* const kStepAgentKeys[] = {"server_name", "server", "mcp_server",
                                      "agent", "agents", "relevant_agents", "servers"};
const char* const kQueryAgentKeys[] = {"relevant_agents", "relevant_servers",
                                       "ground_truth_agents", "ground_truth",
                                       "servers", "agents"};

std::optional<std::string> first_string(const json& rec,
                                        std::span<const char* const> keys) {
    for (const char* key : keys) {
        if (rec.contains(key)) {
            const json& v = rec[key];
            if (v.is_string()) {
                return v.get<std::string>();
            }
            if (v.is_number_integer()) {
                return std::to_string(v.get<long long>());
            }
        }
    }
    return std::nullopt;
}

std::vector<std::string> collect_names(const json& value) {
    std::vector<std::string> names;
    if (value.is_string()) {
        names.push_back(value.get<std::string>());
    } else if (value.is_array()) {
        for (const json& item : value) {
            if (item.is_string()) {
                names.push_back(item.get<std::string>());
            }
        }
    }
    return names;
}

std::string resolve_agent_name(const std::string& name, const KnowledgeGraph* catalog,
                               std::vector<std::string>& warnings) {
    if (catalog == nullptr) {
        return name.rfind("agent:", 0) == 0 ? name : "agent:" + name;
    }
    if (catalog->has_agent(name)) {
        return name;
    }
    for (const AgentNode& agent : catalog->agents()) {
        if (agent.name == name) {
            return agent.id;
        }
    }
    const std::string synthesized =
        name.rfind("agent:", 0) == 0 ? name : "agent:" + name;
    if (!catalog->has_agent(synthesized)) {
        warnings.push_back("agent '" + name + "' not found in catalog");
    }
    return synthesized;
}

void append_unique(std::vector<std::string>& list, const std::string& value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) {
        list.push_back(value);
    }
}

} // namespace

nlohmann::json convert_external_dataset(const nlohmann::json& raw,
                                        const KnowledgeGraph* catalog) {
    const json* records = nullptr;
    if (raw.is_array()) {
        records = &raw;
    } else if (raw.is_object()) {
        for (const char* key : {"queries", "questions", "tasks", "data"}) {
            if (raw.contains(key) && raw[key].is_array()) {
                records = &raw[key];
                break;
            }
        }
    }
    if (records == nullptr) {
        throw ParseError("convert: input must be an array of records or an object "
                         "holding one under 'queries'/'questions'/'tasks'/'data'");
    }

    std::vector<std::string> warnings;
    json queries = json::array();
    std::size_t index = 0;
    for (const json& rec : *records) {
        if (!rec.is_object()) {
            throw ParseError("convert: record #" + std::to_string(index) +
                             " is not an object");
        }
        const std::string id =
            first_string(rec, kIdKeys).value_or("q" + std::to_string(index));
        const auto question = first_string(rec, kQuestionKeys);
        if (!question) {
            throw ParseError("convert: record '" + id + "' has no question text");
        }

        std::vector<std::string> steps;
        std::vector<std::vector<std::string>> per_step;
        bool any_step_agents = false;
        for (const char* key : kStepsKeys) {
            if (!rec.contains(key) || !rec[key].is_array()) {
                continue;
            }
            for (const json& step_rec : rec[key]) {
                if (step_rec.is_string()) {
                    steps.push_back(step_rec.get<std::string>());
                    per_step.emplace_back();
                } else if (step_rec.is_object()) {
                    const auto text = first_string(step_rec, kStepTextKeys);
                    steps.push_back(text.value_or(""));
                    std::vector<std::string> step_agents;
                    for (const char* agent_key : kStepAgentKeys) {
                        if (step_rec.contains(agent_key)) {
                            for (const std::string& name :
                                 collect_names(step_rec[agent_key])) {
                                append_unique(step_agents,
                                              resolve_agent_name(name, catalog, warnings));
                            }
                        }
                    }
                    if (step_rec.contains("tools") && step_rec["tools"].is_array()) {
                        for (const json& tool_rec : step_rec["tools"]) {
                            if (!tool_rec.is_object()) {
                                continue;
                            }
                            for (const char* agent_key : {"server_name", "server", "agent"}) {
                                if (tool_rec.contains(agent_key) &&
                                    tool_rec[agent_key].is_string()) {
                                    append_unique(
                                        step_agents,
                                        resolve_agent_name(
                                            tool_rec[agent_key].get<std::string>(),
                                            catalog, warnings));
                                }
                            }
                        }
                    }
                    any_step_agents = any_step_agents || !step_agents.empty();
                    per_step.push_back(std::move(step_agents));
                }
            }
            break;
        }

        std::vector<std::string> relevant;
        for (const char* key : kQueryAgentKeys) {
            if (rec.contains(key)) {
                for (const std::string& name : collect_names(rec[key])) {
                    append_unique(relevant, resolve_agent_name(name, catalog, warnings));
                }
                if (!relevant.empty()) {
                    break;
                }
            }
        }
        // Question-level ground truth falls back to the union of step labels.
        if (relevant.empty()) {
            for (const auto& step_agents : per_step) {
                for (const std::string& agent_id : step_agents) {
                    append_unique(relevant, agent_id);
                }
            }
        }
        if (relevant.empty()) {
            warnings.push_back("record '" + id + "' has no ground-truth agents");
        }

        json out{{"id", id},
                 {"question", *question},
                 {"steps", steps},
                 {"relevant_agents", relevant}};
        if (any_step_agents) {
            out["relevant_agents_per_step"] = per_step;
        }
        queries.push_back(std::move(out));
        ++index;
    }

    json result{{"queries", queries}, {"source_records", index}};
    if (!warnings.empty()) {
        result["warnings"] = warnings;
    }
    return result;
}

const char* to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::Graph: return "graph";
    case Strategy::AgentOnly: return "agent-only";
    case Strategy::ToolOnly: return "tool-only";
    case Strategy::Bm25: return "bm25";
    case Strategy::Wrrf: return "wrrf";
    }
    return "graph";
}

Strategy strategy_from_string(std::string_view text) {
    if (text == "graph") return Strategy::Graph;
    if (text == "agent-only") return Strategy::AgentOnly;
    if (text == "tool-only") return Strategy::ToolOnly;
    if (text == "bm25") return Strategy::Bm25;
    if (text == "wrrf") return Strategy::Wrrf;
    throw ParseError("unknown strategy '" + std::string(text) + "'");
}

const char* to_string(Granularity granularity) {
    return granularity == Granularity::PerStep ? "per_step" : "per_query_union";
}

Granularity granularity_from_string(std::string_view text) {
    if (text == "per_step") return Granularity::PerStep;
    if (text == "per_query_union") return Granularity::PerQueryUnion;
    throw ParseError("unknown granularity '" + std::string(text) + "'");
}

int EvalConfig::max_k() const {
    if (ks.empty()) {
        throw ConfigError("eval: at least one K is required");
    }
    return *std::max_element(ks.begin(), ks.end());
}

int EvalConfig::resolved_n() const {
    return n > 0 ? n : default_top_n(max_k());
}

void EvalConfig::validate() const {
    for (int k : ks) {
        if (k < 1) {
            throw ConfigError("eval: every K must be at least 1");
        }
    }
    if (resolved_n() < max_k()) {
        throw ConfigError("eval: n must be at least the largest K");
    }
    fusion.validate();
}

double MetricsReport::agent_evidence_fraction() const {
    const std::size_t total = agent_evidence_count + tool_evidence_count;
    return total == 0 ? 0.0
                      : static_cast<double>(agent_evidence_count) /
                            static_cast<double>(total);
}

double MetricsReport::tool_evidence_fraction() const {
    const std::size_t total = agent_evidence_count + tool_evidence_count;
    return total == 0 ? 0.0
                      : static_cast<double>(tool_evidence_count) /
                            static_cast<double>(total);
}

EvalContext::EvalContext(std::shared_ptr<const KnowledgeGraph> graph,
                         std::shared_ptr<const VectorIndex> tool_index,
                         std::shared_ptr<const VectorIndex> agent_index,
                         std::shared_ptr<EmbeddingProvider> provider)
    : graph_(std::move(graph)),
      tool_index_(std::move(tool_index)),
      agent_index_(std::move(agent_index)),
      provider_(std::move(provider)) {}

const Bm25Index& EvalContext::bm25(NodeType corpus, const Bm25Params& params,
                                   const TextOptions& options) const {
    std::ostringstream key;
    key << to_string(corpus) << "/" << params.k1 << "/" << params.b << "/"
        << options.type_prefix << options.include_schema;
    std::lock_guard<std::mutex> lock(bm25_mutex_);
    auto it = bm25_cache_.find(key.str());
    if (it == bm25_cache_.end()) {
        it = bm25_cache_
                 .emplace(key.str(), Bm25Index::build(*graph_, corpus, params, options))
                 .first;
    }
    return it->second;
}

std::vector<AgentHit> EvalContext::run_strategy(const std::string& text,
                                                const EvalConfig& config) const {
    const std::size_t k = static_cast<std::size_t>(config.max_k());
    const std::size_t n = static_cast<std::size_t>(config.resolved_n());

    switch (config.strategy) {
    case Strategy::Graph: {
        Retriever retriever(graph_, tool_index_, agent_index_, provider_);
        RetrievalRequest params;
        params.k = config.max_k();
        params.n = config.resolved_n();
        params.fusion = config.fusion;
        std::vector<AgentHit> hits;
        for (const RankedAgent& agent : retriever.rank_agents(text, params)) {
            hits.push_back({agent.agent_id, agent.evidence.candidate.node_type,
                            agent.evidence.fused_score});
        }
        return hits;
    }
    case Strategy::AgentOnly:
        return agent_only_retrieve(*agent_index_, provider_->embed(text), k);
    case Strategy::ToolOnly:
        return tool_only_retrieve(*tool_index_, *graph_, provider_->embed(text), k, n);
    case Strategy::Bm25:
        return bm25_retrieve_agents(bm25(config.bm25_corpus, config.bm25, config.text),
                                    *graph_, text, k);
    case Strategy::Wrrf:
        return standard_wrrf_retrieve(*tool_index_, *agent_index_, *graph_,
                                      provider_->embed(text), config.fusion, k, n);
    }
    throw ConfigError("eval: unknown strategy");
}

namespace {

struct QueryOutcome {
    std::map<int, MetricValues> by_k;
    std::size_t agent_evidence = 0;
    std::size_t tool_evidence = 0;
};

std::vector<std::string> hit_ids(const std::vector<AgentHit>& hits) {
    std::vector<std::string> ids;
    ids.reserve(hits.size());
    for (const AgentHit& hit : hits) {
        ids.push_back(hit.agent_id);
    }
    return ids;
}

QueryOutcome evaluate_query(const EvalContext& context, const EvalQuery& query,
                            const EvalConfig& config) {
    QueryOutcome outcome;

    const bool stepwise = config.mode == QueryMode::Stepwise && !query.steps.empty();
    const std::vector<std::string> steps =
        stepwise ? query.steps : std::vector<std::string>{query.question};

    std::vector<std::vector<AgentHit>> per_step_hits;
    per_step_hits.reserve(steps.size());
    for (const std::string& step : steps) {
        per_step_hits.push_back(context.run_strategy(step, config));
    }

    const AgentSet question_relevant(query.relevant_agents.begin(),
                                     query.relevant_agents.end());

    if (config.granularity == Granularity::PerStep) {
        for (const std::vector<AgentHit>& hits : per_step_hits) {
            for (const AgentHit& hit : hits) {
                (hit.evidence_type == NodeType::Agent ? outcome.agent_evidence
                                                      : outcome.tool_evidence)++;
            }
        }
        for (int k : config.ks) {
            MetricValues sum;
            for (std::size_t i = 0; i < steps.size(); ++i) {
                AgentSet relevant = question_relevant;
                if (stepwise && i < query.relevant_per_step.size() &&
                    !query.relevant_per_step[i].empty()) {
                    relevant = AgentSet(query.relevant_per_step[i].begin(),
                                        query.relevant_per_step[i].end());
                }
                const MetricValues v = score_list(
                    hit_ids(per_step_hits[i]), relevant, static_cast<std::size_t>(k));
                sum.recall += v.recall;
                sum.map += v.map;
                sum.ndcg += v.ndcg;
            }
            const double count = static_cast<double>(steps.size());
            outcome.by_k[k] = {sum.recall / count, sum.map / count, sum.ndcg / count};
        }
        return outcome;
    }

    // per_query_union: order-preserving cross-step union truncated to max K.
    std::vector<AgentHit> unioned;
    AgentSet seen;
    for (const std::vector<AgentHit>& hits : per_step_hits) {
        for (const AgentHit& hit : hits) {
            if (unioned.size() == static_cast<std::size_t>(config.max_k())) {
                break;
            }
            if (seen.insert(hit.agent_id).second) {
                unioned.push_back(hit);
            }
        }
    }
    for (const AgentHit& hit : unioned) {
        (hit.evidence_type == NodeType::Agent ? outcome.agent_evidence
                                              : outcome.tool_evidence)++;
    }
    const std::vector<std::string> union_ids = hit_ids(unioned);
    for (int k : config.ks) {
        outcome.by_k[k] =
            score_list(union_ids, question_relevant, static_cast<std::size_t>(k));
    }
    return outcome;
}

json fusion_to_json(const FusionConfig& fusion) {
    return json{{"k", fusion.k},
                {"alpha_agent", fusion.alpha_agent},
                {"alpha_tool", fusion.alpha_tool}};
}

json run_metadata(const EvalContext& context, const EvalConfig& config,
                  std::size_t query_count) {
    json policies{
        {"consolidation_tie_break",
         "similarity desc, tool before agent, ingestion ordinal"},
        {"step_union",
         "steps in order, rank order within step, first occurrence wins, "
         "truncated to k"},
        {"short_lists", "scored as-is, never padded"},
        {"query_text_prefix", config.text.type_prefix}};
    if (config.strategy == Strategy::Wrrf) {
        policies["reconstruction"] =
            "standard weighted RRF over per-corpus rank lists (tool rank with "
            "alpha_tool, agent rank with alpha_agent)";
    }
    if (config.strategy == Strategy::AgentOnly) {
        policies["reconstruction"] =
            "dense retrieval over agent descriptions only (query-retrieval "
            "baseline)";
    }
    json metadata{{"strategy", to_string(config.strategy)},
                  {"fusion", fusion_to_json(config.fusion)},
                  {"provider_model", context.provider().model_id()},
                  {"dim", context.provider().dim()},
                  {"n", config.resolved_n()},
                  {"ks", config.ks},
                  {"mode", to_string(config.mode)},
                  {"granularity", to_string(config.granularity)},
                  {"catalog",
                   {{"agents", context.graph().agent_count()},
                    {"tools", context.graph().tool_count()}}},
                  {"queries", query_count},
                  {"text_options",
                   {{"type_prefix", config.text.type_prefix},
                    {"include_schema", config.text.include_schema}}},
                  {"policies", policies}};
    if (config.strategy == Strategy::Bm25) {
        metadata["bm25"] = {{"k1", config.bm25.k1},
                            {"b", config.bm25.b},
                            {"corpus", to_string(config.bm25_corpus)}};
    }
    return metadata;
}

} // namespace

MetricsReport evaluate_run(const EvalContext& context,
                           const std::vector<EvalQuery>& dataset,
                           const EvalConfig& config) {
    config.validate();
    validate_dataset(dataset, context.graph());

    std::vector<QueryOutcome> outcomes(dataset.size());
    std::size_t worker_count = config.threads > 0
                                   ? config.threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    worker_count = std::min(worker_count, dataset.size());

    if (worker_count <= 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            outcomes[i] = evaluate_query(context, dataset[i], config);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < dataset.size();
                     i = next.fetch_add(1)) {
                    try {
                        outcomes[i] = evaluate_query(context, dataset[i], config);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        return;
                    }
                }
            });
        }
        for (std::thread& worker : workers) {
            worker.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    MetricsReport report;
    for (int k : config.ks) {
        report.by_k[k] = {};
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        QueryBreakdown breakdown;
        breakdown.query_id = dataset[i].id;
        breakdown.by_k = outcomes[i].by_k;
        report.per_query.push_back(std::move(breakdown));
        report.agent_evidence_count += outcomes[i].agent_evidence;
        report.tool_evidence_count += outcomes[i].tool_evidence;
        for (int k : config.ks) {
            const MetricValues& v = outcomes[i].by_k.at(k);
            report.by_k[k].recall += v.recall;
            report.by_k[k].map += v.map;
            report.by_k[k].ndcg += v.ndcg;
        }
    }
    const double count = dataset.empty() ? 1.0 : static_cast<double>(dataset.size());
    for (int k : config.ks) {
        report.by_k[k].recall /= count;
        report.by_k[k].map /= count;
        report.by_k[k].ndcg /= count;
    }
    report.metadata = run_metadata(context, config, dataset.size());
    return report;
}

nlohmann::json report_to_json(const MetricsReport& report) {
    json by_k = json::object();
    for (const auto& [k, values] : report.by_k) {
        by_k[std::to_string(k)] = {{"recall", values.recall},
                                   {"map", values.map},
                                   {"ndcg", values.ndcg}};
    }
    json per_query = json::array();
    for (const QueryBreakdown& breakdown : report.per_query) {
        json q_by_k = json::object();
        for (const auto& [k, values] : breakdown.by_k) {
            q_by_k[std::to_string(k)] = {{"recall", values.recall},
                                         {"map", values.map},
                                         {"ndcg", values.ndcg}};
        }
        per_query.push_back({{"id", breakdown.query_id}, {"by_k", q_by_k}});
    }
    return json{{"by_k", by_k},
                {"per_query", per_query},
                {"provenance",
                 {{"agent_evidence_count", report.agent_evidence_count},
                  {"tool_evidence_count", report.tool_evidence_count},
                  {"agent_evidence_fraction", report.agent_evidence_fraction()},
                  {"tool_evidence_fraction", report.tool_evidence_fraction()}}},
                {"metadata", report.metadata}};
}

std::string report_table(const MetricsReport& report) {
    const std::string strategy = report.metadata.value("strategy", "?");
    std::ostringstream out;
    out << std::left << std::setw(12) << "strategy" << std::right << std::setw(4)
        << "K" << std::setw(10) << "recall" << std::setw(10) << "map"
        << std::setw(10) << "ndcg" << "\n";
    for (const auto& [k, values] : report.by_k) {
        out << std::left << std::setw(12) << strategy << std::right << std::setw(4)
            << k << std::fixed << std::setprecision(4) << std::setw(10)
            << values.recall << std::setw(10) << values.map << std::setw(10)
            << values.ndcg << "\n";
        out.unsetf(std::ios::fixed);
        out << std::setprecision(6);
    }
    return out.str();
}

std::vector<std::pair<double, double>> default_weight_grid() {
    return {{1.0, 3.0}, {1.0, 2.0}, {1.0, 1.5}, {1.0, 1.0},
            {1.5, 1.0}, {2.0, 1.0}, {3.0, 1.0}};
}

SweepReport sweep_weights(const EvalContext& context,
                          const std::vector<EvalQuery>& dataset,
                          const std::vector<std::pair<double, double>>& grid,
                          const EvalConfig& base_config) {
    if (grid.empty()) {
        throw ConfigError("sweep: the weight grid must not be empty");
    }
    SweepReport report;
    for (const auto& [alpha_agent, alpha_tool] : grid) {
        SweepRow row;
        row.alpha_agent = alpha_agent;
        row.alpha_tool = alpha_tool;

        EvalConfig typed = base_config;
        typed.strategy = Strategy::Graph;
        typed.fusion.alpha_agent = alpha_agent;
        typed.fusion.alpha_tool = alpha_tool;
        row.type_weighted = evaluate_run(context, dataset, typed);

        EvalConfig standard = base_config;
        standard.strategy = Strategy::Wrrf;
        standard.fusion.alpha_agent = alpha_agent;
        standard.fusion.alpha_tool = alpha_tool;
        row.standard_wrrf = evaluate_run(context, dataset, standard);

        report.rows.push_back(std::move(row));
    }

    json grid_json = json::array();
    for (const auto& [alpha_agent, alpha_tool] : grid) {
        grid_json.push_back({alpha_agent, alpha_tool});
    }
    report.metadata = json{{"grid", grid_json},
                           {"rrf_k", base_config.fusion.k},
                           {"mode", to_string(base_config.mode)},
                           {"granularity", to_string(base_config.granularity)},
                           {"provider_model", context.provider().model_id()},
                           {"queries", dataset.size()}};
    return report;
}

nlohmann::json sweep_to_json(const SweepReport& report) {
    json rows = json::array();
    for (const SweepRow& row : report.rows) {
        rows.push_back({{"alpha_agent", row.alpha_agent},
                        {"alpha_tool", row.alpha_tool},
                        {"type_weighted", report_to_json(row.type_weighted)},
                        {"standard_wrrf", report_to_json(row.standard_wrrf)}});
    }
    return json{{"rows", rows}, {"metadata", report.metadata}};
}

std::string sweep_table(const SweepReport& report) {
    int top_k = 0;
    if (!report.rows.empty() && !report.rows.front().type_weighted.by_k.empty()) {
        top_k = report.rows.front().type_weighted.by_k.rbegin()->first;
    }
    std::ostringstream out;
    out << std::left << std::setw(14) << "(a_A, a_T)";
    for (const char* column :
         {"ours R@", "rrf R@", "ours mAP@", "rrf mAP@", "ours nDCG@", "rrf nDCG@"}) {
        out << std::right << std::setw(12) << (std::string(column) + std::to_string(top_k));
    }
    out << "\n";
    std::ostringstream series;
    series << "recall@" << top_k << " series:";
    for (const SweepRow& row : report.rows) {
        std::ostringstream label;
        label << "(" << row.alpha_agent << ", " << row.alpha_tool << ")";
        const MetricValues& ours = row.type_weighted.by_k.at(top_k);
        const MetricValues& rrf = row.standard_wrrf.by_k.at(top_k);
        out << std::left << std::setw(14) << label.str() << std::right << std::fixed
            << std::setprecision(4) << std::setw(12) << ours.recall << std::setw(12)
            << rrf.recall << std::setw(12) << ours.map << std::setw(12) << rrf.map
            << std::setw(12) << ours.ndcg << std::setw(12) << rrf.ndcg << "\n";
        out.unsetf(std::ios::fixed);
        out << std::setprecision(6);
        series << " " << label.str() << "=" << std::fixed << std::setprecision(4)
               << ours.recall;
        series.unsetf(std::ios::fixed);
        series << std::setprecision(6);
    }
    out << series.str() << "\n";
    return out.str();
}

} // namespace agentroute
