#include "agentroute/container.hpp"

#include <fstream>

#include "agentroute/errors.hpp"
#include "agentroute/remote_embedding.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

namespace {

using nlohmann::json;

json index_to_json(const VectorIndex& index) {
    json entries = json::array();
    for (const VectorIndex::Entry& entry : index.entries()) {
        entries.push_back({{"id", entry.node_id}, {"values", entry.vector.values}});
    }
    return json{{"corpus", to_string(index.corpus_type())},
                {"model_id", index.model_id()},
                {"dim", index.dim()},
                {"entries", entries}};
}

VectorIndex index_from_json(const json& doc) {
    const NodeType corpus = node_type_from_string(doc.at("corpus").get<std::string>());
    const std::string model_id = doc.at("model_id").get<std::string>();
    const std::size_t dim = doc.at("dim").get<std::size_t>();
    std::vector<VectorIndex::Entry> entries;
    for (const json& rec : doc.at("entries")) {
        VectorIndex::Entry entry;
        entry.node_id = rec.at("id").get<std::string>();
        entry.vector.model_id = model_id;
        entry.vector.values = rec.at("values").get<std::vector<double>>();
        entries.push_back(std::move(entry));
    }
    return VectorIndex(corpus, model_id, dim, std::move(entries));
}

// Index entries must mirror the corpus: same ids, same ingestion order.
void check_alignment(const IndexContainer& container) {
    const auto& agents = container.graph.agents();
    const auto& agent_entries = container.agent_index.entries();
    if (agents.size() != agent_entries.size()) {
        throw ParseError("container: agent index size " +
                         std::to_string(agent_entries.size()) +
                         " does not match catalog (" + std::to_string(agents.size()) +
                         " agents)");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (agents[i].id != agent_entries[i].node_id) {
            throw ParseError("container: agent index entry #" + std::to_string(i) +
                             " is '" + agent_entries[i].node_id + "', expected '" +
                             agents[i].id + "'");
        }
    }
    const auto& tools = container.graph.tools();
    const auto& tool_entries = container.tool_index.entries();
    if (tools.size() != tool_entries.size()) {
        throw ParseError("container: tool index size " +
                         std::to_string(tool_entries.size()) +
                         " does not match catalog (" + std::to_string(tools.size()) +
                         " tools)");
    }
    for (std::size_t i = 0; i < tools.size(); ++i) {
        if (tools[i].id != tool_entries[i].node_id) {
            throw ParseError("container: tool index entry #" + std::to_string(i) +
                             " is '" + tool_entries[i].node_id + "', expected '" +
                             tools[i].id + "'");
        }
    }
    if (container.tool_index.model_id() != container.agent_index.model_id()) {
        throw ParseError("container: tool and agent indexes were built with "
                         "different models ('" +
                         container.tool_index.model_id() + "' vs '" +
                         container.agent_index.model_id() + "')");
    }
}

} // namespace

std::string IndexContainer::fingerprint() const {
    std::string acc = model_id();
    for (const AgentNode& agent : graph.agents()) {
        acc += '\x1e';
        acc += agent.id;
    }
    for (const ToolNode& tool : graph.tools()) {
        acc += '\x1f';
        acc += tool.id;
    }
    return content_hash_hex(acc);
}

IndexContainer build_container(const KnowledgeGraph& graph,
                               EmbeddingProvider& provider,
                               const TextOptions& options,
                               std::string provider_kind,
                               nlohmann::json provider_params) {
    IndexContainer container;
    container.graph = graph;
    container.tool_index = build_index(graph, provider, NodeType::Tool, options);
    container.agent_index = build_index(graph, provider, NodeType::Agent, options);
    container.provider_kind = std::move(provider_kind);
    container.provider_params = std::move(provider_params);
    container.text = options;
    return container;
}

nlohmann::json container_to_json(const IndexContainer& container) {
    return json{{"format", "agentroute.container"},
                {"format_version", kContainerFormatVersion},
                {"graph", graph_to_json(container.graph)},
                {"tool_index", index_to_json(container.tool_index)},
                {"agent_index", index_to_json(container.agent_index)},
                {"provider",
                 {{"kind", container.provider_kind},
                  {"params", container.provider_params}}},
                {"text_options",
                 {{"type_prefix", container.text.type_prefix},
                  {"include_schema", container.text.include_schema}}},
                {"fingerprint", container.fingerprint()}};
}

IndexContainer container_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != "agentroute.container") {
        throw ParseError("container: unrecognized format");
    }
    const int version = doc.value("format_version", -1);
    if (version != kContainerFormatVersion) {
        throw ParseError("container: format_version " + std::to_string(version) +
                         " not supported (expected " +
                         std::to_string(kContainerFormatVersion) + ")");
    }
    IndexContainer container;
    container.graph = graph_from_json(doc.at("graph"));
    container.tool_index = index_from_json(doc.at("tool_index"));
    container.agent_index = index_from_json(doc.at("agent_index"));
    container.provider_kind = doc.at("provider").at("kind").get<std::string>();
    container.provider_params = doc.at("provider").at("params");
    if (doc.contains("text_options")) {
        container.text.type_prefix = doc["text_options"].value("type_prefix", false);
        container.text.include_schema =
            doc["text_options"].value("include_schema", false);
    }
    check_alignment(container);
    return container;
}

void save_container(const IndexContainer& container,
                    const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw IoError("cannot write container '" + tmp.string() + "'");
        }
        out << container_to_json(container).dump(2) << "\n";
        if (!out) {
            throw IoError("failed writing container '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

IndexContainer load_container(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open container '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("container '" + path.string() + "': " + e.what());
    }
    return container_from_json(doc);
}

std::shared_ptr<EmbeddingProvider> make_provider(const std::string& kind,
                                                 const nlohmann::json& params) {
    if (kind == "hashed") {
        const std::size_t dim = params.value("dim", 128);
        const std::uint64_t seed = params.value("seed", 0);
        return std::make_shared<HashedEmbeddingProvider>(dim, seed);
    }
    if (kind == "remote") {
        RemoteProviderConfig config;
        config.endpoint = params.value("endpoint", "");
        config.path = params.value("path", "/v1/embeddings");
        config.model = params.value("model", "");
        config.api_key_env = params.value("api_key_env", "AGENTROUTE_API_KEY");
        config.dim = params.value("dim", 0);
        config.batch_size = params.value("batch_size", 64);
        config.max_in_flight = params.value("max_in_flight", 4);
        config.timeout = std::chrono::seconds(params.value("timeout_s", 30));
        config.cache_dir = params.value("cache_dir", "");
        return std::make_shared<RemoteEmbeddingProvider>(std::move(config));
    }
    throw ConfigError("unknown provider kind '" + kind + "'");
}

void check_model_compatible(const IndexContainer& container,
                            const EmbeddingProvider& provider) {
    if (provider.model_id() != container.model_id()) {
        throw ConfigError("index was built with model '" + container.model_id() +
                          "' but the provider is '" + provider.model_id() +
                          "'; rebuild the index or switch providers");
    }
}

} // namespace agentroute
