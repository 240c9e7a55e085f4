#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace agentroute {

enum class NodeType { Tool, Agent };

const char* to_string(NodeType type);
NodeType node_type_from_string(std::string_view text);

struct AgentNode {
    std::string id;
    std::string name;
    std::string description;
    std::map<std::string, std::string> metadata;

    bool operator==(const AgentNode&) const = default;
};

struct ToolNode {
    std::string id;
    std::string name;
    std::string description;
    std::string parent_agent_id;
    // Parameter schema rendered as text. Stored for completeness; excluded
    // from the embedded text unless TextOptions::include_schema is set.
    std::string schema_text;

    bool operator==(const ToolNode&) const = default;
};

// Bipartite catalog of agents and the tools they own. Edges run tool ->
// parent agent and are derived from ToolNode::parent_agent_id. Immutable
// after build(); safe for concurrent reads.
//
// Ingestion order of both node lists is preserved and doubles as the stable
// secondary ordering used for similarity tie-breaking downstream.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Validates and assembles the graph. Throws ValidationError on empty
    // names, duplicate ids (within a corpus or across corpora), or tools
    // whose parent_agent_id names no agent.
    static KnowledgeGraph build(std::vector<AgentNode> agents,
                                std::vector<ToolNode> tools);

    const std::vector<AgentNode>& agents() const { return agents_; }
    const std::vector<ToolNode>& tools() const { return tools_; }

    std::size_t agent_count() const { return agents_.size(); }
    std::size_t tool_count() const { return tools_.size(); }
    // One ownership edge per tool.
    std::size_t edge_count() const { return tools_.size(); }

    bool has_agent(std::string_view id) const;
    bool has_tool(std::string_view id) const;

    const AgentNode& agent(std::string_view id) const;
    const ToolNode& tool(std::string_view id) const;

    // Position within the corpus ingestion order.
    std::size_t agent_ordinal(std::string_view id) const;
    std::size_t tool_ordinal(std::string_view id) const;

    // Resolves a node to its executable agent: identity for agents, the
    // parent agent for tools. Throws ValidationError on unknown ids.
    const std::string& owner_of(std::string_view node_id, NodeType type) const;

    bool operator==(const KnowledgeGraph& other) const {
        return agents_ == other.agents_ && tools_ == other.tools_;
    }

private:
    std::vector<AgentNode> agents_;
    std::vector<ToolNode> tools_;
    std::unordered_map<std::string, std::size_t> agent_index_;
    std::unordered_map<std::string, std::size_t> tool_index_;
};

// Manifest ingestion. Accepts a single JSON document ({"agents": [...],
// "tools": [...]}, or a bare array of agent records) or JSONL with one agent
// record per line. Records without explicit ids get synthesized ones:
// "agent:<name>" and "tool:<agent-name>/<tool-name>". See README for the
// full schema.
KnowledgeGraph load_manifest(const std::filesystem::path& path);
KnowledgeGraph parse_manifest(const std::string& text, const std::string& origin);

// Graph persistence with a format-version field. Serialization is
// deterministic: identical graphs produce identical bytes.
nlohmann::json graph_to_json(const KnowledgeGraph& graph);
KnowledgeGraph graph_from_json(const nlohmann::json& doc);
void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& path);
KnowledgeGraph load_graph(const std::filesystem::path& path);

inline constexpr int kGraphFormatVersion = 1;

} // namespace agentroute
