#include "agentroute/embedding.hpp"

#include <cmath>

#include "agentroute/errors.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim()) {
        throw Error("cosine_similarity: dimension mismatch (" +
                    std::to_string(u.dim()) + " vs " + std::to_string(v.dim()) + ")");
    }
    if (!u.model_id.empty() && !v.model_id.empty() && u.model_id != v.model_id) {
        throw Error("cosine_similarity: model mismatch ('" + u.model_id +
                    "' vs '" + v.model_id + "')");
    }
    double dot = 0.0;
    double norm_u = 0.0;
    double norm_v = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        norm_u += u.values[i] * u.values[i];
        norm_v += v.values[i] * v.values[i];
    }
    if (norm_u == 0.0 || norm_v == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
}

namespace {

std::string format_text(const std::string& name, const std::string& description) {
    if (trim(description).empty()) {
        return name;
    }
    return name + ": " + description;
}

} // namespace

std::string node_text(const AgentNode& node, const TextOptions& options) {
    std::string text = format_text(node.name, node.description);
    if (options.type_prefix) {
        text = "agent: " + text;
    }
    return text;
}

std::string node_text(const ToolNode& node, const TextOptions& options) {
    std::string text = format_text(node.name, node.description);
    if (options.include_schema && !trim(node.schema_text).empty()) {
        text += " " + node.schema_text;
    }
    if (options.type_prefix) {
        text = "tool: " + text;
    }
    return text;
}

EmbeddingVector EmbeddingProvider::embed(const std::string& text) {
    return embed_batch({text}).front();
}

HashedEmbeddingProvider::HashedEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ == 0) {
        throw ConfigError("embedding dimension must be positive");
    }
    model_id_ = "hashed-bow-" + std::to_string(dim_) + "-" + std::to_string(seed_);
}

EmbeddingVector HashedEmbeddingProvider::embed_one(const std::string& text) const {
    EmbeddingVector vec;
    vec.model_id = model_id_;
    vec.values.assign(dim_, 0.0);

    for (const std::string& token : tokenize_lower(text)) {
        const std::uint64_t h = mix64(fnv1a64(token) ^ mix64(seed_));
        const std::size_t bucket = static_cast<std::size_t>(h % dim_);
        const double sign = (mix64(h) & 1) ? 1.0 : -1.0;
        vec.values[bucket] += sign;
    }

    double norm = 0.0;
    for (double v : vec.values) {
        norm += v * v;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& v : vec.values) {
            v /= norm;
        }
    }
    return vec;
}

std::vector<EmbeddingVector> HashedEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        out.push_back(embed_one(text));
    }
    return out;
}

} // namespace agentroute
