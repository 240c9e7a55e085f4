#include "doctest.h"

#include <random>

#include "agentroute/errors.hpp"
#include "agentroute/retrieval.hpp"
#include "oracles.hpp"

using namespace agentroute;

namespace {

struct Pipeline {
    std::shared_ptr<const KnowledgeGraph> graph;
    std::shared_ptr<const VectorIndex> tool_index;
    std::shared_ptr<const VectorIndex> agent_index;
    std::shared_ptr<HashedEmbeddingProvider> provider;
    std::shared_ptr<Retriever> retriever;
};

Pipeline make_pipeline(KnowledgeGraph graph, std::size_t dim = 128) {
    Pipeline p;
    p.provider = std::make_shared<HashedEmbeddingProvider>(dim);
    p.graph = std::make_shared<const KnowledgeGraph>(std::move(graph));
    p.tool_index = std::make_shared<const VectorIndex>(
        build_index(*p.graph, *p.provider, NodeType::Tool));
    p.agent_index = std::make_shared<const VectorIndex>(
        build_index(*p.graph, *p.provider, NodeType::Agent));
    p.retriever =
        std::make_shared<Retriever>(p.graph, p.tool_index, p.agent_index, p.provider);
    return p;
}

KnowledgeGraph duplicate_owner_graph() {
    // Two agents: A owns t1, t2; B owns t3. Descriptions are arranged so the
    // query "alpha beta gamma" ranks the tools [t1, t2, t3] with the agent
    // nodes far behind.
    std::vector<AgentNode> agents(2);
    agents[0].id = "A";
    agents[0].name = "A";
    agents[0].description = "zzz qqq unrelated words";
    agents[1].id = "B";
    agents[1].name = "B";
    agents[1].description = "yyy www other words";
    std::vector<ToolNode> tools(3);
    tools[0].id = "t1";
    tools[0].name = "t1";
    tools[0].description = "alpha beta gamma";
    tools[0].parent_agent_id = "A";
    tools[1].id = "t2";
    tools[1].name = "t2";
    tools[1].description = "alpha beta";
    tools[1].parent_agent_id = "A";
    tools[2].id = "t3";
    tools[2].name = "t3";
    tools[2].description = "alpha";
    tools[2].parent_agent_id = "B";
    return KnowledgeGraph::build(std::move(agents), std::move(tools));
}

RetrievalRequest request_for(const std::string& text, int k) {
    RetrievalRequest request;
    request.query_text = text;
    request.k = k;
    return request;
}

} // namespace

TEST_CASE("single agent catalog always routes to that agent") {
    std::vector<AgentNode> agents(1);
    agents[0].id = "agent:only";
    agents[0].name = "only";
    agents[0].description = "does things";
    std::vector<ToolNode> tools(1);
    tools[0].id = "tool:only/t";
    tools[0].name = "t";
    tools[0].description = "a thing doer";
    tools[0].parent_agent_id = "agent:only";
    Pipeline p = make_pipeline(KnowledgeGraph::build(std::move(agents), std::move(tools)));

    const RetrievalResult result =
        p.retriever->retrieve(request_for("completely unrelated query text", 1));
    REQUIRE(result.agents.size() == 1);
    CHECK(result.agents[0].agent_id == "agent:only");
}

TEST_CASE("duplicate owners are skipped while walking the fused list") {
    Pipeline p = make_pipeline(duplicate_owner_graph());
    const RetrievalResult result = p.retriever->retrieve(request_for("alpha beta gamma", 2));
    REQUIRE(result.agents.size() == 2);
    CHECK(result.agents[0].agent_id == "A");
    CHECK(result.agents[0].evidence.candidate.node_id == "t1");
    CHECK(result.agents[1].agent_id == "B");
    CHECK(result.agents[1].evidence.candidate.node_id == "t3");
}

TEST_CASE("agent evidence is used when the agent node itself ranks first") {
    std::vector<AgentNode> agents(2);
    agents[0].id = "agent:files";
    agents[0].name = "files";
    agents[0].description = "file search backup archive";
    agents[1].id = "agent:other";
    agents[1].name = "other";
    agents[1].description = "music playlist";
    std::vector<ToolNode> tools(1);
    tools[0].id = "tool:other/t";
    tools[0].name = "t";
    tools[0].description = "playlist shuffle";
    tools[0].parent_agent_id = "agent:other";
    Pipeline p = make_pipeline(KnowledgeGraph::build(std::move(agents), std::move(tools)));

    const RetrievalResult result =
        p.retriever->retrieve(request_for("file search backup archive", 1));
    REQUIRE(result.agents.size() == 1);
    CHECK(result.agents[0].agent_id == "agent:files");
    CHECK(result.agents[0].evidence.candidate.node_type == NodeType::Agent);
}

TEST_CASE("every evidence tool's owner equals the paired agent id") {
    std::mt19937 rng(5);
    const KnowledgeGraph graph = oracle::random_catalog(rng, 10, 40);
    Pipeline p = make_pipeline(graph);
    for (int trial = 0; trial < 20; ++trial) {
        const RetrievalResult result =
            p.retriever->retrieve(request_for(oracle::random_text(rng, 2, 5), 5));
        for (const RankedAgent& agent : result.agents) {
            if (agent.evidence.candidate.node_type == NodeType::Tool) {
                CHECK(p.graph->tool(agent.evidence.candidate.node_id).parent_agent_id ==
                      agent.agent_id);
            } else {
                CHECK(agent.evidence.candidate.node_id == agent.agent_id);
            }
        }
    }
}

TEST_CASE("dedup keeps the highest-fused-score candidate per agent") {
    std::mt19937 rng(13);
    const KnowledgeGraph graph = oracle::random_catalog(rng, 8, 50);
    Pipeline p = make_pipeline(graph);
    RetrievalRequest params = request_for("", 8);
    params.fusion.alpha_agent = 1.5;

    for (int trial = 0; trial < 20; ++trial) {
        const std::string text = oracle::random_text(rng, 2, 5);
        // recompute the full fused list through the library building blocks
        const EmbeddingVector qv = p.provider->embed(text);
        std::vector<Candidate> merged = p.tool_index->top_n(qv, params.resolved_n());
        auto agent_hits = p.agent_index->top_n(qv, params.resolved_n());
        merged.insert(merged.end(), agent_hits.begin(), agent_hits.end());
        const auto fused = type_weighted_rank(merged, params.fusion);

        const auto agents = p.retriever->rank_agents(text, params);
        for (const RankedAgent& agent : agents) {
            double best = -1.0;
            for (const ScoredCandidate& sc : fused) {
                const std::string owner =
                    p.graph->owner_of(sc.candidate.node_id, sc.candidate.node_type);
                if (owner == agent.agent_id) {
                    best = std::max(best, sc.fused_score);
                }
            }
            CHECK(agent.evidence.fused_score == doctest::Approx(best).epsilon(1e-15));
        }
    }
}

TEST_CASE("result for K is a prefix of the result for K+1") {
    std::mt19937 rng(19);
    const KnowledgeGraph graph = oracle::random_catalog(rng, 12, 60);
    Pipeline p = make_pipeline(graph);
    for (int trial = 0; trial < 10; ++trial) {
        const std::string text = oracle::random_text(rng, 2, 4);
        for (int k = 1; k <= 5; ++k) {
            const auto small = p.retriever->rank_agents(text, request_for(text, k));
            const auto large = p.retriever->rank_agents(text, request_for(text, k + 1));
            REQUIRE(small.size() <= large.size());
            for (std::size_t i = 0; i < small.size(); ++i) {
                CHECK(small[i].agent_id == large[i].agent_id);
            }
        }
    }
}

TEST_CASE("fewer unique agents than K yields a short result, not padding") {
    Pipeline p = make_pipeline(duplicate_owner_graph());
    const RetrievalResult result = p.retriever->retrieve(request_for("alpha", 10));
    CHECK(result.agents.size() == 2);
}

TEST_CASE("empty catalog returns an empty flagged result") {
    Pipeline p = make_pipeline(KnowledgeGraph());
    const RetrievalResult result = p.retriever->retrieve(request_for("anything", 3));
    CHECK(result.agents.empty());
    CHECK(result.catalog_empty);
}

TEST_CASE("request validation") {
    RetrievalRequest bad_k = request_for("q", 0);
    CHECK_THROWS_AS(bad_k.validate(), ConfigError);

    RetrievalRequest bad_n = request_for("q", 5);
    bad_n.n = 3;
    CHECK_THROWS_AS(bad_n.validate(), ConfigError);

    RetrievalRequest stepless = request_for("q", 5);
    stepless.mode = QueryMode::Stepwise;
    CHECK_THROWS_AS(stepless.validate(), ConfigError);

    RetrievalRequest fine = request_for("q", 5);
    CHECK(fine.resolved_n() == 50);
    fine.k = 20;
    CHECK(fine.resolved_n() == 200);
    CHECK_NOTHROW(fine.validate());
}

TEST_CASE("stepwise with one step matches direct retrieval on that text") {
    std::mt19937 rng(43);
    const KnowledgeGraph graph = oracle::random_catalog(rng, 10, 40);
    Pipeline p = make_pipeline(graph);

    RetrievalRequest stepwise = request_for("ignored umbrella text", 4);
    stepwise.mode = QueryMode::Stepwise;
    stepwise.steps = {"file search"};
    const RetrievalResult step_result = p.retriever->retrieve(stepwise);

    const RetrievalResult direct_result = p.retriever->retrieve(request_for("file search", 4));

    REQUIRE(step_result.per_step.size() == 1);
    REQUIRE(step_result.agents.size() == direct_result.agents.size());
    for (std::size_t i = 0; i < step_result.agents.size(); ++i) {
        CHECK(step_result.agents[i].agent_id == direct_result.agents[i].agent_id);
    }
}

TEST_CASE("stepwise union is order-preserving and truncated to K") {
    Pipeline p = make_pipeline(duplicate_owner_graph());

    // step 1 ranks [A, B] (t1 then t3); step 2 with reversed emphasis ranks
    // [B, A]; union keeps first occurrences in step order.
    RetrievalRequest request = request_for("", 3);
    request.mode = QueryMode::Stepwise;
    request.steps = {"alpha beta gamma", "alpha"};
    const RetrievalResult result = p.retriever->retrieve(request);

    REQUIRE(result.per_step.size() == 2);
    REQUIRE(!result.per_step[0].empty());
    std::vector<std::string> union_ids;
    for (const RankedAgent& agent : result.agents) {
        union_ids.push_back(agent.agent_id);
    }
    CHECK(union_ids == std::vector<std::string>{"A", "B"});

    RetrievalRequest truncated = request;
    truncated.k = 1;
    const RetrievalResult one = p.retriever->retrieve(truncated);
    CHECK(one.agents.size() == 1);
    CHECK(one.agents[0].agent_id == "A");
    // per-step lists still carry their own K agents each
    CHECK(one.per_step.size() == 2);
}

TEST_CASE("per_step count equals the number of request steps") {
    std::mt19937 rng(47);
    const KnowledgeGraph graph = oracle::random_catalog(rng, 10, 30);
    Pipeline p = make_pipeline(graph);
    RetrievalRequest request = request_for("", 3);
    request.mode = QueryMode::Stepwise;
    request.steps = {"file search", "send email", "book flight"};
    const RetrievalResult result = p.retriever->retrieve(request);
    CHECK(result.per_step.size() == 3);
}

TEST_CASE("retrieve_agents equals the straight-line pipeline oracle") {
    std::mt19937 rng(53);
    for (int round = 0; round < 10; ++round) {
        const KnowledgeGraph graph = oracle::random_catalog(rng, 20, 100);
        Pipeline p = make_pipeline(graph);
        RetrievalRequest params = request_for("", 5);
        params.fusion.alpha_agent = 1.5;

        for (int trial = 0; trial < 5; ++trial) {
            const std::string text = oracle::random_text(rng, 2, 6);
            const EmbeddingVector qv = p.provider->embed(text);
            const auto expected = oracle::alg1(
                *p.graph, p.tool_index->entries(), p.agent_index->entries(), qv, 5,
                static_cast<std::size_t>(params.resolved_n()), params.fusion.alpha_agent,
                params.fusion.alpha_tool, params.fusion.k);
            const auto actual = p.retriever->rank_agents(text, params);
            REQUIRE(actual.size() == expected.agent_ids.size());
            for (std::size_t i = 0; i < actual.size(); ++i) {
                CHECK(actual[i].agent_id == expected.agent_ids[i]);
                CHECK(actual[i].evidence.candidate.node_id ==
                      expected.evidence_node_ids[i]);
            }
        }
    }
}

TEST_CASE("request wire format round-trips") {
    RetrievalRequest request;
    request.query_text = "find a hotel";
    request.k = 3;
    request.n = 40;
    request.fusion.alpha_agent = 1.5;
    request.fusion.k = 42.0;
    request.mode = QueryMode::Stepwise;
    request.steps = {"a", "b"};
    const RetrievalRequest parsed =
        retrieval_request_from_json(retrieval_request_to_json(request));
    CHECK(parsed.query_text == request.query_text);
    CHECK(parsed.k == request.k);
    CHECK(parsed.n == request.n);
    CHECK(parsed.fusion == request.fusion);
    CHECK(parsed.mode == QueryMode::Stepwise);
    CHECK(parsed.steps == request.steps);

    CHECK_THROWS_AS(retrieval_request_from_json(nlohmann::json::array()), ParseError);
    CHECK_THROWS_AS(retrieval_request_from_json(nlohmann::json{{"k", 3}}), ParseError);
}
