// agentroute CLI: build index containers, route queries, run benchmark
// evaluations and weight sweeps, convert external datasets, serve over HTTP.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "agentroute/container.hpp"
#include "agentroute/errors.hpp"
#include "agentroute/eval.hpp"
#include "agentroute/remote_embedding.hpp"
#include "agentroute/retrieval.hpp"
#include "agentroute/service.hpp"

namespace {

using nlohmann::json;
using namespace agentroute;

struct ProviderFlags {
    std::string kind = "hashed";
    std::size_t dim = 128;
    std::uint64_t seed = 0;
    std::string endpoint;
    std::string model;
    std::string api_key_env = "AGENTROUTE_API_KEY";
    std::size_t batch_size = 64;
    int timeout_s = 30;
    std::string cache_dir;
    bool overridden = false;
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& flags) {
    cmd->add_option("--provider", flags.kind, "Embedding provider: hashed | remote")
        ->check(CLI::IsMember({"hashed", "remote"}))
        ->each([&flags](const std::string&) { flags.overridden = true; });
    cmd->add_option("--dim", flags.dim, "Vector dimension (hashed provider)")
        ->each([&flags](const std::string&) { flags.overridden = true; });
    cmd->add_option("--seed", flags.seed, "Hash seed (hashed provider)")
        ->each([&flags](const std::string&) { flags.overridden = true; });
    cmd->add_option("--endpoint", flags.endpoint,
                    "Remote endpoint origin, e.g. https://api.openai.com")
        ->each([&flags](const std::string&) { flags.overridden = true; });
    cmd->add_option("--model", flags.model, "Remote embedding model name")
        ->each([&flags](const std::string&) { flags.overridden = true; });
    cmd->add_option("--api-key-env", flags.api_key_env,
                    "Environment variable holding the API key");
    cmd->add_option("--batch-size", flags.batch_size, "Texts per remote request");
    cmd->add_option("--timeout", flags.timeout_s, "Remote request timeout (seconds)");
    cmd->add_option("--cache-dir", flags.cache_dir, "Embedding cache directory");
}

json provider_params(const ProviderFlags& flags) {
    if (flags.kind == "hashed") {
        return json{{"dim", flags.dim}, {"seed", flags.seed}};
    }
    json params{{"endpoint", flags.endpoint},
                {"model", flags.model},
                {"api_key_env", flags.api_key_env},
                {"batch_size", flags.batch_size},
                {"timeout_s", flags.timeout_s}};
    if (!flags.cache_dir.empty()) {
        params["cache_dir"] = flags.cache_dir;
    }
    return params;
}

std::shared_ptr<EmbeddingProvider> provider_for_container(
    const IndexContainer& container, const ProviderFlags& flags) {
    std::shared_ptr<EmbeddingProvider> provider;
    if (flags.overridden) {
        provider = make_provider(flags.kind, provider_params(flags));
    } else {
        json params = container.provider_params;
        if (!flags.cache_dir.empty()) {
            params["cache_dir"] = flags.cache_dir;
        }
        provider = make_provider(container.provider_kind, params);
    }
    check_model_compatible(container, *provider);
    return provider;
}

void emit(const json& doc, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write output file '" + output_path + "'");
    }
    out << doc.dump(2) << "\n";
}

struct SharedQueryFlags {
    int k = 5;
    int n = 0;
    double alpha_agent = 1.0;
    double alpha_tool = 1.0;
    double rrf_k = 60.0;
};

void add_fusion_flags(CLI::App* cmd, SharedQueryFlags& flags) {
    cmd->add_option("--k", flags.k, "Number of agents to return");
    cmd->add_option("--n", flags.n, "Per-corpus retrieval cutoff (0 = max(50, 10*k))");
    cmd->add_option("--alpha-agent", flags.alpha_agent, "Agent-node fusion weight");
    cmd->add_option("--alpha-tool", flags.alpha_tool, "Tool-node fusion weight");
    cmd->add_option("--rrf-k", flags.rrf_k, "RRF damping constant");
}

std::vector<std::pair<double, double>> parse_grid(const std::string& text) {
    std::vector<std::pair<double, double>> grid;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("sweep: grid entries look like 'alphaAgent:alphaTool'");
        }
        grid.emplace_back(std::stod(item.substr(0, colon)),
                          std::stod(item.substr(colon + 1)));
    }
    if (grid.empty()) {
        throw ConfigError("sweep: empty grid");
    }
    return grid;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"agentroute: bipartite agent/tool retrieval engine"};
    app.require_subcommand(1);

    // ---- index ----
    auto* index_cmd = app.add_subcommand("index", "Build a graph + vector index container");
    std::string catalog_path;
    std::string index_output;
    ProviderFlags index_provider;
    TextOptions index_text;
    index_cmd->add_option("--catalog", catalog_path, "Agent/tool manifest file")
        ->required();
    index_cmd->add_option("--output", index_output, "Container output path")->required();
    index_cmd->add_flag("--type-prefix", index_text.type_prefix,
                        "Prefix node texts with 'agent: ' / 'tool: '");
    index_cmd->add_flag("--include-schema", index_text.include_schema,
                        "Append tool schemas to embedded text");
    add_provider_flags(index_cmd, index_provider);

    // ---- query ----
    auto* query_cmd = app.add_subcommand("query", "Route a query to top-K agents");
    std::string query_index_path;
    std::string query_text;
    std::vector<std::string> query_steps;
    std::string query_output;
    SharedQueryFlags query_fusion;
    ProviderFlags query_provider;
    query_cmd->add_option("--index", query_index_path, "Container file")->required();
    query_cmd->add_option("--text", query_text, "Query text")->required();
    query_cmd->add_option("--step", query_steps,
                          "Decomposed sub-task (repeatable; enables stepwise mode)");
    query_cmd->add_option("--output", query_output, "Write result JSON here");
    add_fusion_flags(query_cmd, query_fusion);
    add_provider_flags(query_cmd, query_provider);

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "Score a strategy on a benchmark dataset");
    std::string eval_index_path;
    std::string eval_dataset_path;
    std::string eval_strategy = "graph";
    std::string eval_granularity = "per_step";
    std::string eval_mode = "stepwise";
    std::string eval_ks = "1,3,5";
    std::string eval_bm25_corpus = "agent";
    std::string eval_output;
    SharedQueryFlags eval_fusion;
    ProviderFlags eval_provider;
    std::size_t eval_threads = 0;
    eval_cmd->add_option("--index", eval_index_path, "Container file")->required();
    eval_cmd->add_option("--dataset", eval_dataset_path, "Benchmark dataset")->required();
    eval_cmd->add_option("--strategy", eval_strategy,
                         "graph | agent-only | tool-only | bm25 | wrrf")
        ->check(CLI::IsMember({"graph", "agent-only", "tool-only", "bm25", "wrrf"}));
    eval_cmd->add_option("--granularity", eval_granularity, "per_step | per_query_union")
        ->check(CLI::IsMember({"per_step", "per_query_union"}));
    eval_cmd->add_option("--mode", eval_mode, "stepwise | direct")
        ->check(CLI::IsMember({"stepwise", "direct"}));
    eval_cmd->add_option("--ks", eval_ks, "Comma-separated K values");
    eval_cmd->add_option("--bm25-corpus", eval_bm25_corpus, "agent | tool")
        ->check(CLI::IsMember({"agent", "tool"}));
    eval_cmd->add_option("--threads", eval_threads, "Worker threads (0 = auto)");
    eval_cmd->add_option("--output", eval_output, "Write report JSON here");
    add_fusion_flags(eval_cmd, eval_fusion);
    add_provider_flags(eval_cmd, eval_provider);

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Weight-ratio sweep: typed vs standard wRRF");
    std::string sweep_index_path;
    std::string sweep_dataset_path;
    std::string sweep_grid = "1:3,1:2,1:1.5,1:1,1.5:1,2:1,3:1";
    std::string sweep_granularity = "per_step";
    std::string sweep_mode = "stepwise";
    std::string sweep_ks = "1,3,5";
    std::string sweep_output;
    SharedQueryFlags sweep_fusion;
    ProviderFlags sweep_provider;
    std::size_t sweep_threads = 0;
    sweep_cmd->add_option("--index", sweep_index_path, "Container file")->required();
    sweep_cmd->add_option("--dataset", sweep_dataset_path, "Benchmark dataset")->required();
    sweep_cmd->add_option("--grid", sweep_grid,
                          "Comma-separated alphaAgent:alphaTool pairs");
    sweep_cmd->add_option("--granularity", sweep_granularity, "per_step | per_query_union")
        ->check(CLI::IsMember({"per_step", "per_query_union"}));
    sweep_cmd->add_option("--mode", sweep_mode, "stepwise | direct")
        ->check(CLI::IsMember({"stepwise", "direct"}));
    sweep_cmd->add_option("--ks", sweep_ks, "Comma-separated K values");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = auto)");
    sweep_cmd->add_option("--output", sweep_output, "Write sweep JSON here");
    add_fusion_flags(sweep_cmd, sweep_fusion);
    add_provider_flags(sweep_cmd, sweep_provider);

    // ---- convert-dataset ----
    auto* convert_cmd = app.add_subcommand(
        "convert-dataset", "Map external benchmark question files to the dataset schema");
    std::string convert_input;
    std::string convert_output;
    std::string convert_catalog;
    std::string convert_index;
    convert_cmd->add_option("--input", convert_input, "External question file")->required();
    convert_cmd->add_option("--output", convert_output, "Converted dataset path");
    convert_cmd->add_option("--catalog", convert_catalog,
                            "Manifest used to resolve agent names");
    convert_cmd->add_option("--index", convert_index,
                            "Container used to resolve agent names");

    // ---- serve ----
    auto* serve_cmd = app.add_subcommand("serve", "Serve retrieval over HTTP");
    std::string serve_index_path;
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    serve_cmd->add_option("--index", serve_index_path, "Container file")->required();
    serve_cmd->add_option("--host", serve_host, "Bind address");
    serve_cmd->add_option("--port", serve_port, "Port");

    CLI11_PARSE(app, argc, argv);

    if (index_cmd->parsed()) {
        const KnowledgeGraph graph = load_manifest(catalog_path);
        auto provider = make_provider(index_provider.kind, provider_params(index_provider));
        IndexContainer container =
            build_container(graph, *provider, index_text, index_provider.kind,
                            provider_params(index_provider));
        save_container(container, index_output);
        std::cout << json{{"agents", graph.agent_count()},
                          {"tools", graph.tool_count()},
                          {"model_id", container.model_id()},
                          {"fingerprint", container.fingerprint()},
                          {"output", index_output}}
                         .dump(2)
                  << "\n";
        return 0;
    }

    if (query_cmd->parsed()) {
        IndexContainer container = load_container(query_index_path);
        auto provider = provider_for_container(container, query_provider);
        const std::string fingerprint = container.fingerprint();
        const std::string model_id = container.model_id();

        auto graph = std::make_shared<const KnowledgeGraph>(std::move(container.graph));
        auto tool_index =
            std::make_shared<const VectorIndex>(std::move(container.tool_index));
        auto agent_index =
            std::make_shared<const VectorIndex>(std::move(container.agent_index));
        Retriever retriever(graph, tool_index, agent_index, provider);

        RetrievalRequest request;
        request.query_text = query_text;
        request.k = query_fusion.k;
        request.n = query_fusion.n;
        request.fusion.alpha_agent = query_fusion.alpha_agent;
        request.fusion.alpha_tool = query_fusion.alpha_tool;
        request.fusion.k = query_fusion.rrf_k;
        if (!query_steps.empty()) {
            request.mode = QueryMode::Stepwise;
            request.steps = query_steps;
        }
        request.validate();

        json doc = retrieval_result_to_json(retriever.retrieve(request));
        doc["index"] = {{"fingerprint", fingerprint}, {"model_id", model_id}};
        emit(doc, query_output);
        return 0;
    }

    auto make_context = [](const std::string& index_path,
                           const ProviderFlags& flags) {
        IndexContainer container = load_container(index_path);
        auto provider = provider_for_container(container, flags);
        auto graph = std::make_shared<const KnowledgeGraph>(std::move(container.graph));
        auto tool_index =
            std::make_shared<const VectorIndex>(std::move(container.tool_index));
        auto agent_index =
            std::make_shared<const VectorIndex>(std::move(container.agent_index));
        return EvalContext(graph, tool_index, agent_index, provider);
    };

    auto parse_ks = [](const std::string& text) {
        std::vector<int> ks;
        std::istringstream stream(text);
        std::string item;
        while (std::getline(stream, item, ',')) {
            ks.push_back(std::stoi(item));
        }
        return ks;
    };

    if (eval_cmd->parsed()) {
        EvalContext context = make_context(eval_index_path, eval_provider);
        const std::vector<EvalQuery> dataset = load_dataset(eval_dataset_path);

        EvalConfig config;
        config.strategy = strategy_from_string(eval_strategy);
        config.fusion.alpha_agent = eval_fusion.alpha_agent;
        config.fusion.alpha_tool = eval_fusion.alpha_tool;
        config.fusion.k = eval_fusion.rrf_k;
        config.ks = parse_ks(eval_ks);
        config.n = eval_fusion.n;
        config.mode = query_mode_from_string(eval_mode);
        config.granularity = granularity_from_string(eval_granularity);
        config.bm25_corpus = node_type_from_string(eval_bm25_corpus);
        config.threads = eval_threads;

        const MetricsReport report = evaluate_run(context, dataset, config);
        if (!eval_output.empty()) {
            emit(report_to_json(report), eval_output);
            std::cout << report_table(report);
        } else {
            emit(report_to_json(report), "");
        }
        return 0;
    }

    if (sweep_cmd->parsed()) {
        EvalContext context = make_context(sweep_index_path, sweep_provider);
        const std::vector<EvalQuery> dataset = load_dataset(sweep_dataset_path);

        EvalConfig base;
        base.fusion.k = sweep_fusion.rrf_k;
        base.ks = parse_ks(sweep_ks);
        base.n = sweep_fusion.n;
        base.mode = query_mode_from_string(sweep_mode);
        base.granularity = granularity_from_string(sweep_granularity);
        base.threads = sweep_threads;

        const SweepReport report =
            sweep_weights(context, dataset, parse_grid(sweep_grid), base);
        if (!sweep_output.empty()) {
            emit(sweep_to_json(report), sweep_output);
            std::cout << sweep_table(report);
        } else {
            emit(sweep_to_json(report), "");
        }
        return 0;
    }

    if (convert_cmd->parsed()) {
        std::ifstream in(convert_input);
        if (!in) {
            throw IoError("cannot open input file '" + convert_input + "'");
        }
        json raw;
        in >> raw;

        std::optional<KnowledgeGraph> catalog;
        if (!convert_catalog.empty()) {
            catalog = load_manifest(convert_catalog);
        } else if (!convert_index.empty()) {
            catalog = load_container(convert_index).graph;
        }

        const json converted =
            convert_external_dataset(raw, catalog ? &*catalog : nullptr);
        if (converted.contains("warnings")) {
            for (const json& warning : converted["warnings"]) {
                std::cerr << "warning: " << warning.get<std::string>() << "\n";
            }
        }
        emit(converted, convert_output);
        return 0;
    }

    if (serve_cmd->parsed()) {
        RoutingService service(serve_index_path);
        std::cout << "serving on http://" << serve_host << ":" << serve_port << "\n"
                  << service.version_info().dump(2) << "\n";
        if (!service.run(serve_host, serve_port)) {
            std::cerr << "error: failed to bind " << serve_host << ":" << serve_port
                      << "\n";
            return 1;
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const agentroute::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
