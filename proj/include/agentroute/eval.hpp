#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "agentroute/baselines.hpp"
#include "agentroute/metrics.hpp"
#include "agentroute/retrieval.hpp"

namespace agentroute {

// One benchmark question with its step decomposition and ground truth.
struct EvalQuery {
    std::string id;
    std::string question;
    std::vector<std::string> steps;
    // Question-level ground truth; must be non-empty.
    std::vector<std::string> relevant_agents;
    // Optional step-level ground truth; when present, one entry per step
    // (empty entries fall back to the question-level set).
    std::vector<std::vector<std::string>> relevant_per_step;
};

std::vector<EvalQuery> dataset_from_json(const nlohmann::json& doc);
std::vector<EvalQuery> load_dataset(const std::filesystem::path& path);
nlohmann::json dataset_to_json(const std::vector<EvalQuery>& dataset);

// Throws ValidationError when a query has no ground truth, references an
// agent missing from the catalog, or carries a per-step list whose length
// disagrees with its steps.
void validate_dataset(const std::vector<EvalQuery>& dataset,
                      const KnowledgeGraph& graph);

// Best-effort mapping from externally published evaluation-question files
// (LiveMCPBench-style records) into the dataset schema above. Field aliases
// are documented in the README. When a catalog is given, bare agent names
// are resolved to catalog ids; unresolved names are kept as "agent:<name>"
// and reported in the returned document's "warnings" array.
nlohmann::json convert_external_dataset(const nlohmann::json& raw,
                                        const KnowledgeGraph* catalog);

enum class Strategy { Graph, AgentOnly, ToolOnly, Bm25, Wrrf };

const char* to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view text);

enum class Granularity { PerStep, PerQueryUnion };

const char* to_string(Granularity granularity);
Granularity granularity_from_string(std::string_view text);

struct EvalConfig {
    Strategy strategy = Strategy::Graph;
    FusionConfig fusion;
    std::vector<int> ks = {1, 3, 5};
    // Per-corpus cutoff; 0 resolves to default_top_n(max k).
    int n = 0;
    QueryMode mode = QueryMode::Stepwise;
    Granularity granularity = Granularity::PerStep;
    NodeType bm25_corpus = NodeType::Agent;
    Bm25Params bm25;
    TextOptions text;
    // Worker threads for query evaluation; 0 picks the hardware count.
    std::size_t threads = 0;

    int max_k() const;
    int resolved_n() const;
    void validate() const;
};

struct QueryBreakdown {
    std::string query_id;
    std::map<int, MetricValues> by_k;
};

struct MetricsReport {
    // Aggregates are arithmetic means of the per-query values.
    std::map<int, MetricValues> by_k;
    std::vector<QueryBreakdown> per_query;
    // Provenance of retrieved agents: introduced by an agent node vs
    // traversed from a tool node.
    std::size_t agent_evidence_count = 0;
    std::size_t tool_evidence_count = 0;
    nlohmann::json metadata;

    double agent_evidence_fraction() const;
    double tool_evidence_fraction() const;
};

nlohmann::json report_to_json(const MetricsReport& report);
// Flat table, one row per K.
std::string report_table(const MetricsReport& report);

// Immutable bundle of everything a run needs. BM25 indexes are built on
// demand and memoized per corpus.
class EvalContext {
public:
    EvalContext(std::shared_ptr<const KnowledgeGraph> graph,
                std::shared_ptr<const VectorIndex> tool_index,
                std::shared_ptr<const VectorIndex> agent_index,
                std::shared_ptr<EmbeddingProvider> provider);

    const KnowledgeGraph& graph() const { return *graph_; }
    const VectorIndex& tool_index() const { return *tool_index_; }
    const VectorIndex& agent_index() const { return *agent_index_; }
    EmbeddingProvider& provider() const { return *provider_; }
    const Bm25Index& bm25(NodeType corpus, const Bm25Params& params,
                          const TextOptions& options) const;

    // Ranked agent list for one query text under the configured strategy.
    std::vector<AgentHit> run_strategy(const std::string& text,
                                       const EvalConfig& config) const;

private:
    std::shared_ptr<const KnowledgeGraph> graph_;
    std::shared_ptr<const VectorIndex> tool_index_;
    std::shared_ptr<const VectorIndex> agent_index_;
    std::shared_ptr<EmbeddingProvider> provider_;
    mutable std::map<std::string, Bm25Index> bm25_cache_;
    mutable std::mutex bm25_mutex_;
};

// Runs the configured strategy over the dataset and aggregates Recall/mAP/
// nDCG at each K.
//
// per_step granularity scores each step against its step-level ground truth
// (question-level when absent) and averages over steps, then queries.
// per_query_union scores the order-preserving cross-step union (truncated to
// max K) against the question-level ground truth. Queries without steps are
// treated as a single step holding the question text.
MetricsReport evaluate_run(const EvalContext& context,
                           const std::vector<EvalQuery>& dataset,
                           const EvalConfig& config);

struct SweepRow {
    double alpha_agent = 1.0;
    double alpha_tool = 1.0;
    MetricsReport type_weighted;
    MetricsReport standard_wrrf;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    nlohmann::json metadata;
};

// Default ratio grid, including the unweighted point.
std::vector<std::pair<double, double>> default_weight_grid();

// One evaluate_run per grid point for the type-weighted pipeline and the
// standard-wRRF baseline.
SweepReport sweep_weights(const EvalContext& context,
                          const std::vector<EvalQuery>& dataset,
                          const std::vector<std::pair<double, double>>& grid,
                          const EvalConfig& base_config);

nlohmann::json sweep_to_json(const SweepReport& report);
// Comparison table plus a per-ratio recall series at the largest K.
std::string sweep_table(const SweepReport& report);

} // namespace agentroute
