#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "json.hpp"

#include "agentroute/catalog.hpp"
#include "agentroute/embedding.hpp"
#include "agentroute/index.hpp"

namespace agentroute {

inline constexpr int kContainerFormatVersion = 1;

// Single versioned artifact bundling the graph, both vector indexes, and the
// provider identity they were built with. Saved atomically (temp + rename)
// so a serving process can swap to a rebuilt file between requests.
struct IndexContainer {
    KnowledgeGraph graph;
    VectorIndex tool_index;
    VectorIndex agent_index;
    // Provider recipe so query-time embedding matches the index: "hashed"
    // providers are reconstructed from params; "remote" params carry
    // endpoint/model (credentials stay in the environment).
    std::string provider_kind;
    nlohmann::json provider_params;
    TextOptions text;

    const std::string& model_id() const { return tool_index.model_id(); }
    // Content fingerprint over node ids and the model id; echoed by the
    // service so clients can detect index swaps.
    std::string fingerprint() const;
};

IndexContainer build_container(const KnowledgeGraph& graph,
                               EmbeddingProvider& provider,
                               const TextOptions& options,
                               std::string provider_kind,
                               nlohmann::json provider_params);

nlohmann::json container_to_json(const IndexContainer& container);
IndexContainer container_from_json(const nlohmann::json& doc);

void save_container(const IndexContainer& container,
                    const std::filesystem::path& path);
IndexContainer load_container(const std::filesystem::path& path);

// Instantiates the provider a container was built with. For "remote" kinds
// the API key env var and cache dir come from the params; for "hashed" the
// dim and seed do. Throws ConfigError on unknown kinds.
std::shared_ptr<EmbeddingProvider> make_provider(const std::string& kind,
                                                 const nlohmann::json& params);

// Rejects a provider whose model does not match the container's, naming
// both model ids.
void check_model_compatible(const IndexContainer& container,
                            const EmbeddingProvider& provider);

} // namespace agentroute
