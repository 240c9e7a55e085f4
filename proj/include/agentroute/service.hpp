#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include "agentroute/container.hpp"
#include "agentroute/retrieval.hpp"

namespace agentroute {

// HTTP routing service over an immutable index snapshot.
//
//   GET  /health   -> {"status":"ok"}
//   GET  /version  -> container fingerprint, model, node counts
//   POST /retrieve -> RetrievalRequest JSON in, RetrievalResult JSON out
//                     (the response carries an "index" echo of the snapshot
//                      the query ran against)
//   POST /reload   -> re-reads the container file and swaps the snapshot
//
// Requests always run against one coherent snapshot; /reload swaps the
// shared pointer under a lock, so in-flight requests finish on the snapshot
// they started with.
class RoutingService {
public:
    RoutingService(std::filesystem::path container_path);
    ~RoutingService();

    // Binds to an OS-assigned free port and starts serving on a background
    // thread. Returns the port.
    int start(const std::string& host);
    // Serves on a fixed port; blocks until stop().
    bool run(const std::string& host, int port);
    void stop();

    nlohmann::json version_info() const;
    void reload();

private:
    struct Snapshot {
        std::shared_ptr<Retriever> retriever;
        std::string fingerprint;
        std::string model_id;
        std::size_t agent_count = 0;
        std::size_t tool_count = 0;
    };

    std::shared_ptr<const Snapshot> snapshot() const;
    static std::shared_ptr<const Snapshot> load_snapshot(
        const std::filesystem::path& path);
    void install_routes();

    std::filesystem::path container_path_;
    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Snapshot> snapshot_;

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace agentroute
