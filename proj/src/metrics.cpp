#include "agentroute/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "agentroute/errors.hpp"

namespace agentroute {

namespace {

void check_args(const AgentSet& relevant, std::size_t k) {
    if (relevant.empty()) {
        throw Error("metrics: relevant set must not be empty");
    }
    if (k == 0) {
        throw Error("metrics: k must be at least 1");
    }
}

} // namespace

double recall_at_k(const std::vector<std::string>& retrieved,
                   const AgentSet& relevant, std::size_t k) {
    check_args(relevant, k);
    const std::size_t depth = std::min(k, retrieved.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.count(retrieved[i]) != 0) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double average_precision_at_k(const std::vector<std::string>& retrieved,
                              const AgentSet& relevant, std::size_t k) {
    check_args(relevant, k);
    const std::size_t depth = std::min(k, retrieved.size());
    std::size_t hits = 0;
    double precision_sum = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.count(retrieved[i]) != 0) {
            ++hits;
            precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    const double denom = static_cast<double>(std::min(relevant.size(), k));
    return precision_sum / denom;
}

double ndcg_at_k(const std::vector<std::string>& retrieved,
                 const AgentSet& relevant, std::size_t k) {
    check_args(relevant, k);
    const std::size_t depth = std::min(k, retrieved.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.count(retrieved[i]) != 0) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    const std::size_t ideal_hits = std::min(relevant.size(), k);
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal_hits; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / idcg;
}

MetricValues score_list(const std::vector<std::string>& retrieved,
                        const AgentSet& relevant, std::size_t k) {
    MetricValues values;
    values.recall = recall_at_k(retrieved, relevant, k);
    values.map = average_precision_at_k(retrieved, relevant, k);
    values.ndcg = ndcg_at_k(retrieved, relevant, k);
    return values;
}

} // namespace agentroute
