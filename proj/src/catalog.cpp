#include "agentroute/catalog.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "agentroute/errors.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

namespace {

using nlohmann::json;

std::string describe_record(const json& rec, std::size_t index) {
    if (rec.is_object()) {
        if (rec.contains("id") && rec["id"].is_string()) {
            return rec["id"].get<std::string>();
        }
        if (rec.contains("name") && rec["name"].is_string()) {
            return rec["name"].get<std::string>();
        }
    }
    return "record #" + std::to_string(index);
}

std::string string_field(const json& rec, const char* key,
                         const std::string& where, bool required) {
    if (!rec.contains(key) || rec[key].is_null()) {
        if (required) {
            throw ParseError("manifest: missing field '" + std::string(key) +
                             "' in " + where);
        }
        return {};
    }
    if (!rec[key].is_string()) {
        throw ParseError("manifest: field '" + std::string(key) +
                         "' must be a string in " + where);
    }
    return rec[key].get<std::string>();
}

// Tool schemas may arrive as JSON objects; render them to deterministic text.
std::string schema_field(const json& rec, const std::string& where) {
    if (!rec.contains("schema") || rec["schema"].is_null()) {
        return {};
    }
    const json& s = rec["schema"];
    if (s.is_string()) {
        return s.get<std::string>();
    }
    if (s.is_object() || s.is_array()) {
        return s.dump();
    }
    throw ParseError("manifest: field 'schema' must be a string or object in " + where);
}

struct ManifestAccumulator {
    std::vector<AgentNode> agents;
    std::vector<ToolNode> tools;

    void add_agent_record(const json& rec, std::size_t index) {
        const std::string where = "agent " + describe_record(rec, index);
        if (!rec.is_object()) {
            throw ParseError("manifest: agent record #" + std::to_string(index) +
                             " is not an object");
        }
        AgentNode agent;
        agent.name = string_field(rec, "name", where, /*required=*/true);
        if (trim(agent.name).empty()) {
            throw ValidationError("manifest: agent " + describe_record(rec, index) +
                                  " has an empty name");
        }
        agent.description = string_field(rec, "description", where, false);
        agent.id = string_field(rec, "id", where, false);
        if (agent.id.empty()) {
            agent.id = "agent:" + agent.name;
        }
        if (rec.contains("metadata")) {
            if (!rec["metadata"].is_object()) {
                throw ParseError("manifest: 'metadata' must be an object in " + where);
            }
            for (const auto& [key, value] : rec["metadata"].items()) {
                if (!value.is_string()) {
                    throw ParseError("manifest: metadata values must be strings in " + where);
                }
                agent.metadata[key] = value.get<std::string>();
            }
        }
        if (rec.contains("tools")) {
            if (!rec["tools"].is_array()) {
                throw ParseError("manifest: 'tools' must be an array in " + where);
            }
            std::size_t tool_idx = 0;
            for (const json& tool_rec : rec["tools"]) {
                add_tool_record(tool_rec, tool_idx++, agent.id, agent.name);
            }
        }
        agents.push_back(std::move(agent));
    }

    void add_tool_record(const json& rec, std::size_t index,
                         const std::string& parent_id,
                         const std::string& parent_name) {
        const std::string where = "tool " + describe_record(rec, index);
        if (!rec.is_object()) {
            throw ParseError("manifest: tool record #" + std::to_string(index) +
                             " is not an object");
        }
        ToolNode tool;
        tool.name = string_field(rec, "name", where, /*required=*/true);
        if (trim(tool.name).empty()) {
            throw ValidationError("manifest: tool " + describe_record(rec, index) +
                                  " has an empty name");
        }
        tool.description = string_field(rec, "description", where, false);
        tool.schema_text = schema_field(rec, where);
        tool.parent_agent_id = parent_id;
        tool.id = string_field(rec, "id", where, false);
        if (tool.id.empty()) {
            tool.id = "tool:" + parent_name + "/" + tool.name;
        }
        tools.push_back(std::move(tool));
    }

    // Top-level tool records reference their parent by agent id or name.
    void add_floating_tool(const json& rec, std::size_t index) {
        if (!rec.is_object()) {
            throw ParseError("manifest: tool record #" + std::to_string(index) +
                             " is not an object");
        }
        const std::string where = "tool " + describe_record(rec, index);
        const std::string parent_ref = string_field(rec, "parent", where, /*required=*/true);

        const AgentNode* parent = nullptr;
        for (const AgentNode& agent : agents) {
            if (agent.id == parent_ref || agent.name == parent_ref) {
                parent = &agent;
                break;
            }
        }
        if (parent == nullptr) {
            throw ValidationError("manifest: tool " + describe_record(rec, index) +
                                  " references unknown agent '" + parent_ref + "'");
        }
        add_tool_record(rec, index, parent->id, parent->name);
    }
};

} // namespace

const char* to_string(NodeType type) {
    return type == NodeType::Tool ? "tool" : "agent";
}

NodeType node_type_from_string(std::string_view text) {
    if (text == "tool") {
        return NodeType::Tool;
    }
    if (text == "agent") {
        return NodeType::Agent;
    }
    throw ParseError("unknown node type '" + std::string(text) + "'");
}

KnowledgeGraph KnowledgeGraph::build(std::vector<AgentNode> agents,
                                     std::vector<ToolNode> tools) {
    KnowledgeGraph graph;
    graph.agents_ = std::move(agents);
    graph.tools_ = std::move(tools);

    graph.agent_index_.reserve(graph.agents_.size());
    for (std::size_t i = 0; i < graph.agents_.size(); ++i) {
        const AgentNode& agent = graph.agents_[i];
        if (trim(agent.name).empty()) {
            throw ValidationError("agent '" + agent.id + "' has an empty name");
        }
        if (!graph.agent_index_.emplace(agent.id, i).second) {
            throw ValidationError("duplicate agent id '" + agent.id + "'");
        }
    }

    graph.tool_index_.reserve(graph.tools_.size());
    for (std::size_t i = 0; i < graph.tools_.size(); ++i) {
        const ToolNode& tool = graph.tools_[i];
        if (trim(tool.name).empty()) {
            throw ValidationError("tool '" + tool.id + "' has an empty name");
        }
        if (!graph.tool_index_.emplace(tool.id, i).second) {
            throw ValidationError("duplicate tool id '" + tool.id + "'");
        }
        // Node ids must be unique across both corpora so merged candidate
        // lists key cleanly on node_id.
        if (graph.agent_index_.count(tool.id) != 0) {
            throw ValidationError("id '" + tool.id +
                                  "' is used by both an agent and a tool");
        }
        if (graph.agent_index_.count(tool.parent_agent_id) == 0) {
            throw ValidationError("tool '" + tool.id +
                                  "' references unknown agent '" +
                                  tool.parent_agent_id + "'");
        }
    }
    return graph;
}

bool KnowledgeGraph::has_agent(std::string_view id) const {
    return agent_index_.count(std::string(id)) != 0;
}

bool KnowledgeGraph::has_tool(std::string_view id) const {
    return tool_index_.count(std::string(id)) != 0;
}

const AgentNode& KnowledgeGraph::agent(std::string_view id) const {
    auto it = agent_index_.find(std::string(id));
    if (it == agent_index_.end()) {
        throw ValidationError("unknown agent id '" + std::string(id) + "'");
    }
    return agents_[it->second];
}

const ToolNode& KnowledgeGraph::tool(std::string_view id) const {
    auto it = tool_index_.find(std::string(id));
    if (it == tool_index_.end()) {
        throw ValidationError("unknown tool id '" + std::string(id) + "'");
    }
    return tools_[it->second];
}

std::size_t KnowledgeGraph::agent_ordinal(std::string_view id) const {
    auto it = agent_index_.find(std::string(id));
    if (it == agent_index_.end()) {
        throw ValidationError("unknown agent id '" + std::string(id) + "'");
    }
    return it->second;
}

std::size_t KnowledgeGraph::tool_ordinal(std::string_view id) const {
    auto it = tool_index_.find(std::string(id));
    if (it == tool_index_.end()) {
        throw ValidationError("unknown tool id '" + std::string(id) + "'");
    }
    return it->second;
}

const std::string& KnowledgeGraph::owner_of(std::string_view node_id,
                                            NodeType type) const {
    if (type == NodeType::Agent) {
        return agent(node_id).id;
    }
    return tool(node_id).parent_agent_id;
}

KnowledgeGraph parse_manifest(const std::string& text, const std::string& origin) {
    ManifestAccumulator acc;

    json doc;
    bool whole_doc = true;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error&) {
        whole_doc = false;
    }

    if (whole_doc) {
        if (doc.is_object()) {
            if (!doc.contains("agents") || !doc["agents"].is_array()) {
                throw ParseError(origin + ": manifest object must contain an 'agents' array");
            }
            std::size_t idx = 0;
            for (const json& rec : doc["agents"]) {
                acc.add_agent_record(rec, idx++);
            }
            if (doc.contains("tools")) {
                if (!doc["tools"].is_array()) {
                    throw ParseError(origin + ": 'tools' must be an array");
                }
                idx = 0;
                for (const json& rec : doc["tools"]) {
                    acc.add_floating_tool(rec, idx++);
                }
            }
        } else if (doc.is_array()) {
            std::size_t idx = 0;
            for (const json& rec : doc) {
                acc.add_agent_record(rec, idx++);
            }
        } else {
            throw ParseError(origin + ": manifest must be a JSON object or array");
        }
    } else {
        // JSONL: one agent record per non-empty line.
        std::istringstream lines(text);
        std::string line;
        std::size_t line_no = 0;
        std::size_t parsed = 0;
        while (std::getline(lines, line)) {
            ++line_no;
            if (trim(line).empty()) {
                continue;
            }
            json rec;
            try {
                rec = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(origin + ":" + std::to_string(line_no) +
                                 ": invalid JSON: " + e.what());
            }
            acc.add_agent_record(rec, line_no - 1);
            ++parsed;
        }
        if (parsed == 0) {
            throw ParseError(origin + ": manifest contains no records");
        }
    }

    return KnowledgeGraph::build(std::move(acc.agents), std::move(acc.tools));
}

KnowledgeGraph load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_manifest(buffer.str(), path.string());
}

nlohmann::json graph_to_json(const KnowledgeGraph& graph) {
    json agents = json::array();
    for (const AgentNode& agent : graph.agents()) {
        json metadata = json::object();
        for (const auto& [key, value] : agent.metadata) {
            metadata[key] = value;
        }
        agents.push_back({{"id", agent.id},
                          {"name", agent.name},
                          {"description", agent.description},
                          {"metadata", metadata}});
    }
    json tools = json::array();
    for (const ToolNode& tool : graph.tools()) {
        tools.push_back({{"id", tool.id},
                         {"name", tool.name},
                         {"description", tool.description},
                         {"parent_agent_id", tool.parent_agent_id},
                         {"schema_text", tool.schema_text}});
    }
    return json{{"format", "agentroute.graph"},
                {"format_version", kGraphFormatVersion},
                {"agents", agents},
                {"tools", tools}};
}

KnowledgeGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != "agentroute.graph") {
        throw ParseError("graph file: unrecognized format");
    }
    const int version = doc.value("format_version", -1);
    if (version != kGraphFormatVersion) {
        throw ParseError("graph file: format_version " + std::to_string(version) +
                         " not supported (expected " +
                         std::to_string(kGraphFormatVersion) + ")");
    }
    std::vector<AgentNode> agents;
    for (const json& rec : doc.at("agents")) {
        AgentNode agent;
        agent.id = rec.at("id").get<std::string>();
        agent.name = rec.at("name").get<std::string>();
        agent.description = rec.value("description", "");
        if (rec.contains("metadata")) {
            for (const auto& [key, value] : rec["metadata"].items()) {
                agent.metadata[key] = value.get<std::string>();
            }
        }
        agents.push_back(std::move(agent));
    }
    std::vector<ToolNode> tools;
    for (const json& rec : doc.at("tools")) {
        ToolNode tool;
        tool.id = rec.at("id").get<std::string>();
        tool.name = rec.at("name").get<std::string>();
        tool.description = rec.value("description", "");
        tool.parent_agent_id = rec.at("parent_agent_id").get<std::string>();
        tool.schema_text = rec.value("schema_text", "");
        tools.push_back(std::move(tool));
    }
    return KnowledgeGraph::build(std::move(agents), std::move(tools));
}

void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write graph file '" + path.string() + "'");
    }
    out << graph_to_json(graph).dump(2) << "\n";
    if (!out) {
        throw IoError("failed writing graph file '" + path.string() + "'");
    }
}

KnowledgeGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open graph file '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("graph file '" + path.string() + "': " + e.what());
    }
    return graph_from_json(doc);
}

} // namespace agentroute
