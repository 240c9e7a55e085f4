#include "agentroute/remote_embedding.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#ifdef AGENTROUTE_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include "json.hpp"

#include "agentroute/errors.hpp"
#include "agentroute/text_util.hpp"

namespace agentroute {

namespace {

using nlohmann::json;

// Splits "https://host:port" into (scheme+authority, ok). httplib clients
// take the full origin string directly.
bool looks_like_origin(const std::string& endpoint) {
    return endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0;
}

} // namespace

EmbeddingCache::EmbeddingCache(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::filesystem::path EmbeddingCache::path_for(const std::string& model_id,
                                               const std::string& text) const {
    const std::string key = content_hash_hex(model_id + "\x1f" + text);
    return root_ / (key + ".json");
}

std::optional<EmbeddingVector> EmbeddingCache::lookup(const std::string& model_id,
                                                      const std::string& text) const {
    const std::filesystem::path path = path_for(model_id, text);
    std::shared_lock lock(mutex_);
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
    if (doc.value("model", "") != model_id) {
        return std::nullopt;
    }
    EmbeddingVector vec;
    vec.model_id = model_id;
    vec.values = doc.at("values").get<std::vector<double>>();
    return vec;
}

void EmbeddingCache::store(const std::string& model_id, const std::string& text,
                           const EmbeddingVector& vector) {
    const std::filesystem::path path = path_for(model_id, text);
    const json doc{{"model", model_id},
                   {"text_hash", content_hash_hex(text)},
                   {"dim", vector.dim()},
                   {"values", vector.values}};
    std::unique_lock lock(mutex_);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw IoError("embedding cache: cannot write '" + tmp.string() + "'");
        }
        out << doc.dump();
    }
    std::filesystem::rename(tmp, path);
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteProviderConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, std::min(config_.max_in_flight, 256))) {
    if (!looks_like_origin(config_.endpoint)) {
        throw ConfigError("remote provider: endpoint must start with http:// or https://");
    }
    if (config_.model.empty()) {
        throw ConfigError("remote provider: model name is required");
    }
    if (config_.batch_size == 0) {
        config_.batch_size = 64;
    }
    const char* key = std::getenv(config_.api_key_env.c_str());
    api_key_ = key == nullptr ? "" : key;
    if (!config_.cache_dir.empty()) {
        cache_.emplace(config_.cache_dir);
    }
    resolved_dim_ = config_.dim;
}

std::size_t RemoteEmbeddingProvider::dim() const {
    std::shared_lock lock(dim_mutex_);
    return resolved_dim_;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::fetch_batch(
    const std::vector<std::string>& texts) {
    const json payload{{"model", config_.model}, {"input", texts}};
    const std::string body = payload.dump();

    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(config_.timeout.count(), 0);
    client.set_read_timeout(config_.timeout.count(), 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    std::string last_error;
    auto backoff = config_.retry.initial_backoff;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        in_flight_.acquire();
        httplib::Result res =
            client.Post(config_.path, headers, body, "application/json");
        in_flight_.release();

        bool retryable = false;
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            retryable = true;
        } else if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            retryable = true;
        } else if (res->status != 200) {
            throw ProviderError("remote provider: HTTP " + std::to_string(res->status) +
                                    " from " + config_.endpoint + config_.path,
                                /*retryable=*/false);
        } else {
            json doc;
            try {
                doc = json::parse(res->body);
            } catch (const json::parse_error& e) {
                throw ProviderError(std::string("remote provider: invalid JSON: ") +
                                        e.what(),
                                    false);
            }
            if (!doc.contains("data") || !doc["data"].is_array() ||
                doc["data"].size() != texts.size()) {
                throw ProviderError("remote provider: response 'data' count does not "
                                    "match request size",
                                    false);
            }
            std::vector<EmbeddingVector> out(texts.size());
            for (const json& item : doc["data"]) {
                const std::size_t index = item.value("index", out.size());
                if (index >= out.size()) {
                    throw ProviderError("remote provider: response index out of range",
                                        false);
                }
                EmbeddingVector vec;
                vec.model_id = config_.model;
                vec.values = item.at("embedding").get<std::vector<double>>();
                for (double v : vec.values) {
                    if (!std::isfinite(v)) {
                        throw ProviderError("remote provider: non-finite value in "
                                            "embedding",
                                            false);
                    }
                }
                out[index] = std::move(vec);
            }
            {
                std::unique_lock lock(dim_mutex_);
                if (resolved_dim_ == 0 && !out.empty()) {
                    resolved_dim_ = out.front().dim();
                }
            }
            for (const EmbeddingVector& vec : out) {
                if (vec.dim() != dim()) {
                    throw ProviderError(
                        "remote provider: dimension mismatch (" +
                            std::to_string(vec.dim()) + " vs expected " +
                            std::to_string(dim()) + ")",
                        false);
                }
            }
            return out;
        }

        if (retryable && attempt < config_.retry.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::min(
                std::chrono::milliseconds(static_cast<long>(
                    static_cast<double>(backoff.count()) * config_.retry.multiplier)),
                config_.retry.max_backoff);
        }
    }
    throw ProviderError("remote provider: giving up after " +
                            std::to_string(config_.retry.max_attempts) +
                            " attempts (" + last_error + ")",
                        /*retryable=*/true);
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> missing;

    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (trim(texts[i]).empty()) {
            // Empty-text sentinel: scores 0 against everything.
            out[i].model_id = config_.model;
            out[i].values.assign(std::max<std::size_t>(dim(), 1), 0.0);
            continue;
        }
        if (cache_) {
            if (auto hit = cache_->lookup(config_.model, texts[i])) {
                {
                    std::unique_lock lock(dim_mutex_);
                    if (resolved_dim_ == 0) {
                        resolved_dim_ = hit->dim();
                    }
                }
                out[i] = std::move(*hit);
                continue;
            }
        }
        missing.push_back(i);
    }

    for (std::size_t start = 0; start < missing.size(); start += config_.batch_size) {
        const std::size_t end =
            std::min(start + config_.batch_size, missing.size());
        std::vector<std::string> batch;
        batch.reserve(end - start);
        for (std::size_t j = start; j < end; ++j) {
            batch.push_back(texts[missing[j]]);
        }
        std::vector<EmbeddingVector> fetched = fetch_batch(batch);
        for (std::size_t j = start; j < end; ++j) {
            if (cache_) {
                cache_->store(config_.model, texts[missing[j]], fetched[j - start]);
            }
            out[missing[j]] = std::move(fetched[j - start]);
        }
    }

    // Zero sentinels created before the first remote call may predate dim
    // resolution; fix their length now.
    for (EmbeddingVector& vec : out) {
        if (dim() > 0 && vec.dim() != dim()) {
            bool all_zero = true;
            for (double v : vec.values) {
                all_zero = all_zero && v == 0.0;
            }
            if (all_zero) {
                vec.values.assign(dim(), 0.0);
            }
        }
    }
    return out;
}

} // namespace agentroute
