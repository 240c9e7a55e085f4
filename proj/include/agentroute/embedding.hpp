#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "agentroute/catalog.hpp"

namespace agentroute {

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;

    std::size_t dim() const { return values.size(); }
};

// Standard cosine; symmetric and scale-invariant. Defined as 0 when either
// vector is all zeros (the empty-text sentinel never ranks). Throws Error on
// dimension mismatch or on differing non-empty model ids.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

struct TextOptions {
    // Prepend "agent: " / "tool: " before the node text.
    bool type_prefix = false;
    // Append the tool's parameter schema to its text.
    bool include_schema = false;

    bool operator==(const TextOptions&) const = default;
};

// Canonical embedded text: "<name>: <description>", or the name alone when
// the description is empty.
std::string node_text(const AgentNode& node, const TextOptions& options = {});
std::string node_text(const ToolNode& node, const TextOptions& options = {});

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const std::string& model_id() const = 0;
    virtual std::size_t dim() const = 0;

    // Embeds texts in order. Empty (after trimming) texts map to the zero
    // vector. Must be safe for concurrent calls.
    virtual std::vector<EmbeddingVector> embed_batch(
        const std::vector<std::string>& texts) = 0;

    EmbeddingVector embed(const std::string& text);
};

// Deterministic offline embedder: hashed bag of tokens. Each token is hashed
// to one of `dim` buckets with a ±1 sign drawn from a second hash, the
// bucket counts are accumulated and the result L2-normalized. A pure
// function of (text, dim, seed), so identical runs produce identical
// vectors, and token overlap yields meaningful similarity for tests.
class HashedEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashedEmbeddingProvider(std::size_t dim, std::uint64_t seed = 0);

    const std::string& model_id() const override { return model_id_; }
    std::size_t dim() const override { return dim_; }
    std::uint64_t seed() const { return seed_; }

    std::vector<EmbeddingVector> embed_batch(
        const std::vector<std::string>& texts) override;

    EmbeddingVector embed_one(const std::string& text) const;

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::string model_id_;
};

} // namespace agentroute
