#include "doctest.h"

#include <random>

#include "agentroute/embedding.hpp"
#include "agentroute/errors.hpp"
#include "oracles.hpp"

using namespace agentroute;

TEST_CASE("deterministic provider: identical text gives identical vectors") {
    HashedEmbeddingProvider provider(128);
    const EmbeddingVector a = provider.embed("file search");
    const EmbeddingVector b = provider.embed("file search");
    CHECK(a.values == b.values);
}

TEST_CASE("deterministic provider: requested dimension is honored") {
    HashedEmbeddingProvider provider(256);
    CHECK(provider.embed("anything at all").dim() == 256);
    CHECK(provider.model_id() == "hashed-bow-256-0");
}

TEST_CASE("provider is a pure function of (text, dim, seed)") {
    HashedEmbeddingProvider one(64, 7);
    HashedEmbeddingProvider two(64, 7);
    HashedEmbeddingProvider other_seed(64, 8);
    CHECK(one.embed("calendar sync").values == two.embed("calendar sync").values);
    CHECK(one.embed("calendar sync").values != other_seed.embed("calendar sync").values);
}

TEST_CASE("empty text embeds to the zero sentinel") {
    HashedEmbeddingProvider provider(32);
    const EmbeddingVector zero = provider.embed("   ");
    for (double v : zero.values) {
        CHECK(v == 0.0);
    }
    // and the sentinel scores 0 against everything
    CHECK(cosine_similarity(zero, provider.embed("file search")) == 0.0);
}

TEST_CASE("non-empty embeddings are unit length") {
    HashedEmbeddingProvider provider(128);
    const EmbeddingVector v = provider.embed("weather forecast for tomorrow");
    double norm = 0.0;
    for (double x : v.values) {
        norm += x * x;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("token overlap yields higher similarity than disjoint text") {
    HashedEmbeddingProvider provider(256);
    const auto query = provider.embed("search vacation rentals");
    const auto near = provider.embed("vacation rental search engine");
    const auto far = provider.embed("database schema migration");
    CHECK(cosine_similarity(query, near) > cosine_similarity(query, far));
}

TEST_CASE("cosine: identity, orthogonality, frozen value") {
    const EmbeddingVector u{{1.0, 2.0, 3.0}, ""};
    const EmbeddingVector v{{4.0, 5.0, 6.0}, ""};
    CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));

    const EmbeddingVector ex{{1.0, 0.0}, ""};
    const EmbeddingVector ey{{0.0, 1.0}, ""};
    CHECK(cosine_similarity(ex, ey) == 0.0);

    // 32 / (sqrt(14) * sqrt(77)), evaluated independently
    CHECK(cosine_similarity(u, v) ==
          doctest::Approx(0.9746318461970762).epsilon(1e-12));
    CHECK(cosine_similarity(u, v) ==
          doctest::Approx(oracle::cosine(u.values, v.values)).epsilon(1e-15));
}

TEST_CASE("cosine: symmetry and positive-scale invariance on random vectors") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        EmbeddingVector u, v;
        for (int i = 0; i < 16; ++i) {
            u.values.push_back(dist(rng));
            v.values.push_back(dist(rng));
        }
        const double forward = cosine_similarity(u, v);
        const double backward = cosine_similarity(v, u);
        CHECK(forward == backward);

        EmbeddingVector scaled = u;
        for (double& x : scaled.values) {
            x *= 3.7;
        }
        CHECK(cosine_similarity(scaled, v) == doctest::Approx(forward).epsilon(1e-9));
        CHECK(forward >= -1.0 - 1e-12);
        CHECK(forward <= 1.0 + 1e-12);
    }
}

TEST_CASE("cosine rejects dimension and model mismatches") {
    const EmbeddingVector u{{1.0, 2.0}, "m1"};
    const EmbeddingVector v{{1.0, 2.0, 3.0}, "m1"};
    CHECK_THROWS_AS(cosine_similarity(u, v), Error);
    const EmbeddingVector w{{1.0, 2.0}, "m2"};
    CHECK_THROWS_AS(cosine_similarity(u, w), Error);
}

TEST_CASE("two zero vectors have similarity 0") {
    const EmbeddingVector z{{0.0, 0.0, 0.0}, ""};
    CHECK(cosine_similarity(z, z) == 0.0);
}

TEST_CASE("node_text follows the name: description template") {
    AgentNode agent;
    agent.name = "airbnb";
    agent.description = "vacation rental search";
    CHECK(node_text(agent) == "airbnb: vacation rental search");

    ToolNode tool;
    tool.name = "search_listings";
    tool.description = "";
    CHECK(node_text(tool) == "search_listings");

    CHECK(node_text(agent) == node_text(agent));
}

TEST_CASE("node_text options: type prefix and schema inclusion") {
    AgentNode agent;
    agent.name = "maps";
    agent.description = "routing";
    TextOptions prefixed;
    prefixed.type_prefix = true;
    CHECK(node_text(agent, prefixed) == "agent: maps: routing");

    ToolNode tool;
    tool.name = "geocode";
    tool.description = "address to coordinates";
    tool.schema_text = "{\"q\": \"string\"}";
    CHECK(node_text(tool) == "geocode: address to coordinates");
    TextOptions with_schema;
    with_schema.include_schema = true;
    CHECK(node_text(tool, with_schema) ==
          "geocode: address to coordinates {\"q\": \"string\"}");
}

TEST_CASE("zero dimension is rejected") {
    CHECK_THROWS_AS(HashedEmbeddingProvider(0), ConfigError);
}
