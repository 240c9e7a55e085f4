#include "agentroute/service.hpp"

#include <thread>

#include "httplib.h"

#include "agentroute/errors.hpp"

namespace agentroute {

using nlohmann::json;

struct RoutingService::Impl {
    httplib::Server server;
    std::thread worker;
};

RoutingService::RoutingService(std::filesystem::path container_path)
    : container_path_(std::move(container_path)), impl_(std::make_unique<Impl>()) {
    snapshot_ = load_snapshot(container_path_);
    install_routes();
}

RoutingService::~RoutingService() {
    stop();
}

std::shared_ptr<const RoutingService::Snapshot> RoutingService::load_snapshot(
    const std::filesystem::path& path) {
    IndexContainer container = load_container(path);
    auto snapshot = std::make_shared<Snapshot>();
    snapshot->fingerprint = container.fingerprint();
    snapshot->model_id = container.model_id();
    snapshot->agent_count = container.graph.agent_count();
    snapshot->tool_count = container.graph.tool_count();

    auto graph = std::make_shared<const KnowledgeGraph>(std::move(container.graph));
    auto tool_index =
        std::make_shared<const VectorIndex>(std::move(container.tool_index));
    auto agent_index =
        std::make_shared<const VectorIndex>(std::move(container.agent_index));
    auto provider = make_provider(container.provider_kind, container.provider_params);
    snapshot->retriever =
        std::make_shared<Retriever>(graph, tool_index, agent_index, provider);
    return snapshot;
}

std::shared_ptr<const RoutingService::Snapshot> RoutingService::snapshot() const {
    std::lock_guard<std::mutex> lock(snapshot_mutex_);
    return snapshot_;
}

void RoutingService::reload() {
    auto fresh = load_snapshot(container_path_);
    std::lock_guard<std::mutex> lock(snapshot_mutex_);
    snapshot_ = std::move(fresh);
}

nlohmann::json RoutingService::version_info() const {
    auto snap = snapshot();
    return json{{"format_version", kContainerFormatVersion},
                {"fingerprint", snap->fingerprint},
                {"model_id", snap->model_id},
                {"agents", snap->agent_count},
                {"tools", snap->tool_count}};
}

void RoutingService::install_routes() {
    httplib::Server& server = impl_->server;

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"status", "ok"}}.dump(), "application/json");
    });

    server.Get("/version", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(version_info().dump(), "application/json");
    });

    server.Post("/reload", [this](const httplib::Request&, httplib::Response& res) {
        try {
            reload();
            res.set_content(version_info().dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Post("/retrieve", [this](const httplib::Request& req, httplib::Response& res) {
        auto snap = snapshot();
        try {
            const RetrievalRequest request =
                retrieval_request_from_json(json::parse(req.body));
            request.validate();
            const RetrievalResult result = snap->retriever->retrieve(request);
            json doc = retrieval_result_to_json(result);
            doc["index"] = {{"fingerprint", snap->fingerprint},
                            {"model_id", snap->model_id}};
            res.set_content(doc.dump(), "application/json");
        } catch (const json::parse_error& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        } catch (const ParseError& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        } catch (const ConfigError& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    });
}

int RoutingService::start(const std::string& host) {
    const int port = impl_->server.bind_to_any_port(host);
    if (port <= 0) {
        throw IoError("service: failed to bind to a port on " + host);
    }
    impl_->worker = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

bool RoutingService::run(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

void RoutingService::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable()) {
        impl_->worker.join();
    }
}

} // namespace agentroute
