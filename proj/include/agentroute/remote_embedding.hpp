#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>

#include "agentroute/embedding.hpp"

namespace agentroute {

struct RetryPolicy {
    int max_attempts = 4;
    std::chrono::milliseconds initial_backoff{250};
    double multiplier = 2.0;
    std::chrono::milliseconds max_backoff{4000};
};

struct RemoteProviderConfig {
    // Scheme + host (+ optional port), e.g. "https://api.openai.com".
    std::string endpoint;
    std::string path = "/v1/embeddings";
    std::string model;
    // Credential is read from this environment variable, never from flags or
    // config files.
    std::string api_key_env = "AGENTROUTE_API_KEY";
    // Expected vector dimension; 0 lets the first response pin it.
    std::size_t dim = 0;
    std::size_t batch_size = 64;
    // Cap on concurrent requests across all threads.
    int max_in_flight = 4;
    std::chrono::seconds timeout{30};
    RetryPolicy retry;
    // Content-addressed cache directory; empty disables caching.
    std::filesystem::path cache_dir;
};

// On-disk embedding cache keyed by hash(model_id + text). Files are written
// atomically (temp + rename); concurrent readers share the lock, writers
// take it exclusively.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path root);

    std::optional<EmbeddingVector> lookup(const std::string& model_id,
                                          const std::string& text) const;
    void store(const std::string& model_id, const std::string& text,
               const EmbeddingVector& vector);

    std::filesystem::path path_for(const std::string& model_id,
                                   const std::string& text) const;

private:
    std::filesystem::path root_;
    mutable std::shared_mutex mutex_;
};

// OpenAI-compatible embeddings client: POST {model, input: [texts]} and read
// data[*].embedding. Transient failures (timeouts, 429, 5xx) are retried
// with bounded exponential backoff; auth and malformed-response errors are
// fatal. Cached vectors are served without touching the network, which also
// makes benchmark runs reproducible once the cache is warm.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(RemoteProviderConfig config);

    const std::string& model_id() const override { return config_.model; }
    std::size_t dim() const override;

    std::vector<EmbeddingVector> embed_batch(
        const std::vector<std::string>& texts) override;

private:
    std::vector<EmbeddingVector> fetch_batch(const std::vector<std::string>& texts);

    RemoteProviderConfig config_;
    std::string api_key_;
    std::optional<EmbeddingCache> cache_;
    mutable std::shared_mutex dim_mutex_;
    std::size_t resolved_dim_ = 0;
    std::counting_semaphore<256> in_flight_;
};

} // namespace agentroute
