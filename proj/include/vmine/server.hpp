#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "vmine/error.hpp"
#include "vmine/io.hpp"
#include "vmine/session.hpp"

namespace vmine {

struct ServerOptions {
  NullOptions null;
  double alpha = 0.05;
  std::size_t layout_iterations = 500;
  /// Base directory for relative table paths in uploaded manifests.
  std::filesystem::path data_root = ".";
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request router for the exploration API. The HTTP
/// binding (serve) forwards every request here; tests call it directly.
///
///   POST /datasets                 manifest JSON            -> {dataset, ...}
///   POST /sessions                 {dataset, seed, scope}   -> session payload
///   GET  /sessions/{id}/state
///   POST /sessions/{id}/refine     {clusters: [..]}
///   POST /sessions/{id}/coarsen    {k}
///   POST /sessions/{id}/overlay    {attribute, category?}
///   POST /sessions/{id}/groups     {labels: {"<cluster>": "<label>"}}
///   POST /sessions/{id}/undo | /redo
///   GET  /sessions/{id}/export?kind=json|svg|csv
///
/// Errors come back as {code, message, detail}.
class Api {
 public:
  explicit Api(ServerOptions options = {});

  ApiResponse handle(const std::string& method, const std::string& path,
                     const std::map<std::string, std::string>& query, const std::string& body);

  /// Registers an already-loaded network (used by `serve --manifest`).
  std::string add_dataset(std::shared_ptr<const Network> network,
                          std::optional<std::string> year_attribute);

 private:
  struct Dataset {
    std::shared_ptr<const Network> network;
    std::shared_ptr<const Network> giant;
    std::optional<std::string> year_attribute;
  };

  ApiResponse post_dataset(const Json& body);
  ApiResponse post_session(const Json& body);
  ApiResponse session_route(const std::string& method, const std::string& id,
                            const std::string& action, const std::map<std::string, std::string>& query,
                            const Json& body);
  std::shared_ptr<Session> find_session(const std::string& id);

  ServerOptions options_;
  std::mutex mutex_;
  std::map<std::string, Dataset> datasets_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_dataset_ = 1;
  std::size_t next_session_ = 1;
};

/// HTTP status for an error code (404 unknown ids, 409 history bounds, 400 otherwise).
int http_status(ErrorCode code);

/// HTTP binding of an Api.
class HttpFrontend {
 public:
  explicit HttpFrontend(Api& api);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vmine
