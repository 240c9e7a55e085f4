#include "doctest.h"

#include <cmath>
#include <random>

#include "agentroute/errors.hpp"
#include "agentroute/metrics.hpp"

using namespace agentroute;

namespace {

// Independent formula oracles, written as plain loops over the definitions.
double recall_oracle(const std::vector<std::string>& retrieved,
                     const AgentSet& relevant, std::size_t k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < retrieved.size() && i < k; ++i) {
        hits += relevant.count(retrieved[i]);
    }
    return double(hits) / double(relevant.size());
}

double ap_oracle(const std::vector<std::string>& retrieved, const AgentSet& relevant,
                 std::size_t k) {
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < retrieved.size() && i < k; ++i) {
        if (relevant.count(retrieved[i])) {
            ++hits;
            sum += double(hits) / double(i + 1);
        }
    }
    return sum / double(std::min(relevant.size(), k));
}

double ndcg_oracle(const std::vector<std::string>& retrieved,
                   const AgentSet& relevant, std::size_t k) {
    double dcg = 0.0;
    for (std::size_t i = 0; i < retrieved.size() && i < k; ++i) {
        if (relevant.count(retrieved[i])) {
            dcg += 1.0 / std::log2(double(i + 2));
        }
    }
    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(relevant.size(), k); ++i) {
        idcg += 1.0 / std::log2(double(i + 2));
    }
    return dcg / idcg;
}

} // namespace

TEST_CASE("metric fixtures: hand-computed values") {
    const AgentSet a{"a"};
    const AgentSet ac{"a", "c"};
    const AgentSet ab{"a", "b"};
    const AgentSet abz{"a", "b", "z"};

    // 1. perfect hit at position 1
    CHECK(recall_at_k({"a"}, a, 1) == 1.0);
    // 2. one of two relevant found within k=2
    CHECK(recall_at_k({"b", "a"}, ac, 2) == 0.5);
    // 3. relevant item outside the top-k window
    CHECK(recall_at_k({"x", "y", "a"}, a, 2) == 0.0);
    // 4. recall ignores items beyond position k
    CHECK(recall_at_k({"a", "x", "y", "b"}, ab, 4) == 1.0);

    // 5. single relevant at position 1
    CHECK(average_precision_at_k({"a"}, a, 1) == 1.0);
    // 6. relevant only at position 2: precision@2 = 1/2
    CHECK(average_precision_at_k({"x", "a"}, a, 2) == 0.5);
    // 7. hits at 2 and 4: (1/2 + 2/4) / 2
    CHECK(average_precision_at_k({"x", "a", "y", "b"}, ab, 4) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // 8. all relevant up front: (1 + 1) / min(3, 3)
    CHECK(average_precision_at_k({"a", "b", "x"}, abz, 3) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // 9. single relevant at position 1
    CHECK(ndcg_at_k({"a"}, a, 1) == 1.0);
    // 10. single relevant at position 2 of 2: (1/log2 3) / 1
    CHECK(ndcg_at_k({"x", "a"}, a, 2) ==
          doctest::Approx(0.6309297535714575).epsilon(1e-12));
    // 11. no relevant in the top-k
    CHECK(ndcg_at_k({"x", "y"}, a, 2) == 0.0);
    // 12. hits at 1 and 3 of {a,b}: (1 + 1/2) / (1 + 1/log2 3)
    CHECK(ndcg_at_k({"a", "x", "b"}, ab, 3) ==
          doctest::Approx(0.9197207891481876).epsilon(1e-12));
    // 13. short retrieved list is scored as-is
    CHECK(ndcg_at_k({"a"}, ab, 3) ==
          doctest::Approx(1.0 / (1.0 + 1.0 / std::log2(3.0))).epsilon(1e-12));
    // 14. empty retrieved list scores zero everywhere
    CHECK(recall_at_k({}, a, 3) == 0.0);
    CHECK(average_precision_at_k({}, a, 3) == 0.0);
    CHECK(ndcg_at_k({}, a, 3) == 0.0);
}

TEST_CASE("metrics equal 1 when the top-k holds every relevant item") {
    const AgentSet relevant{"a", "b"};
    const std::vector<std::string> retrieved{"b", "a", "x"};
    CHECK(recall_at_k(retrieved, relevant, 2) == 1.0);
    CHECK(ndcg_at_k(retrieved, relevant, 2) == 1.0);
}

TEST_CASE("empty relevant set is an error") {
    CHECK_THROWS_AS(recall_at_k({"a"}, {}, 1), Error);
    CHECK_THROWS_AS(average_precision_at_k({"a"}, {}, 1), Error);
    CHECK_THROWS_AS(ndcg_at_k({"a"}, {}, 1), Error);
}

TEST_CASE("metrics are invariant to items beyond position k") {
    std::mt19937 rng(97);
    std::uniform_int_distribution<int> id_dist(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> retrieved;
        for (int i = 0; i < 8; ++i) {
            retrieved.push_back("n" + std::to_string(id_dist(rng)));
        }
        AgentSet relevant;
        while (relevant.size() < 3) {
            relevant.insert("n" + std::to_string(id_dist(rng)));
        }
        const std::size_t k = 4;
        std::vector<std::string> tail_changed = retrieved;
        tail_changed.resize(k);
        tail_changed.push_back("n999");
        CHECK(recall_at_k(retrieved, relevant, k) ==
              recall_at_k(tail_changed, relevant, k));
        CHECK(average_precision_at_k(retrieved, relevant, k) ==
              average_precision_at_k(tail_changed, relevant, k));
        CHECK(ndcg_at_k(retrieved, relevant, k) ==
              ndcg_at_k(tail_changed, relevant, k));
    }
}

TEST_CASE("randomized trials agree with the formula oracles") {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> size_dist(1, 10);
    std::uniform_int_distribution<int> k_dist(1, 12);
    std::uniform_int_distribution<int> id_dist(0, 14);
    for (int trial = 0; trial < 1000; ++trial) {
        // random permutation prefix: unique retrieved ids
        std::vector<std::string> pool;
        for (int i = 0; i < 15; ++i) {
            pool.push_back("n" + std::to_string(i));
        }
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<std::string> retrieved(pool.begin(),
                                           pool.begin() + size_dist(rng));
        AgentSet relevant;
        const int relevant_count = size_dist(rng);
        for (int i = 0; i < relevant_count; ++i) {
            relevant.insert("n" + std::to_string(id_dist(rng)));
        }
        const std::size_t k = static_cast<std::size_t>(k_dist(rng));

        CHECK(recall_at_k(retrieved, relevant, k) ==
              doctest::Approx(recall_oracle(retrieved, relevant, k)).epsilon(1e-12));
        CHECK(average_precision_at_k(retrieved, relevant, k) ==
              doctest::Approx(ap_oracle(retrieved, relevant, k)).epsilon(1e-12));
        CHECK(ndcg_at_k(retrieved, relevant, k) ==
              doctest::Approx(ndcg_oracle(retrieved, relevant, k)).epsilon(1e-12));

        const MetricValues bundle = score_list(retrieved, relevant, k);
        CHECK(bundle.recall >= 0.0);
        CHECK(bundle.recall <= 1.0);
        CHECK(bundle.map >= 0.0);
        CHECK(bundle.map <= 1.0);
        CHECK(bundle.ndcg >= 0.0);
        CHECK(bundle.ndcg <= 1.0);
    }
}
