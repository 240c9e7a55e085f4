#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace agentroute {

using AgentSet = std::unordered_set<std::string>;

// Fraction of relevant agents present in the top-k of the retrieved list.
// Throws Error when relevant is empty (the metric is undefined).
double recall_at_k(const std::vector<std::string>& retrieved,
                   const AgentSet& relevant, std::size_t k);

// Average precision truncated at k, normalized by min(|relevant|, k):
//   AP@k = (sum over hit positions i <= k of precision@i) / min(|relevant|, k)
// The harness averages this over queries to report mAP@k.
double average_precision_at_k(const std::vector<std::string>& retrieved,
                              const AgentSet& relevant, std::size_t k);

// Binary-gain nDCG: DCG@k = sum of 1/log2(i+1) over hit positions i <= k,
// normalized by the DCG of min(|relevant|, k) hits in the top positions.
double ndcg_at_k(const std::vector<std::string>& retrieved,
                 const AgentSet& relevant, std::size_t k);

struct MetricValues {
    double recall = 0.0;
    double map = 0.0;
    double ndcg = 0.0;
};

// All three metrics on one ranked list.
MetricValues score_list(const std::vector<std::string>& retrieved,
                        const AgentSet& relevant, std::size_t k);

} // namespace agentroute
