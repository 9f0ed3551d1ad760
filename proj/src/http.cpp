#include "httplib.h"
#include "vmine/server.hpp"

namespace vmine {

struct HttpFrontend::Impl {
  httplib::Server http;
};

HttpFrontend::HttpFrontend(Api& api) : impl_(std::make_unique<Impl>()) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const ApiResponse out = api.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->http.Get(".*", forward);
  impl_->http.Post(".*", forward);
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

void HttpFrontend::run() { impl_->http.listen_after_bind(); }

void HttpFrontend::stop() { impl_->http.stop(); }

}  // namespace vmine
