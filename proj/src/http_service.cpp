/*
 * Copyright 2026 The mtqual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "http_service.hpp"

#include "errors.hpp"
#include "httplib.h"

namespace mtqual {

struct HttpService::Impl {
  AnnotationService& service;
  httplib::Server server;

  explicit Impl(AnnotationService& s) : service(s) {}

  static void reply(httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    if (r.status != 204) res.set_content(r.body.dump(), "application/json");
  }
};

HttpService::HttpService(AnnotationService& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  auto& svc = impl_->service;

  server.Get("/api/tasks/next", [&svc](const httplib::Request& req, httplib::Response& res) {
    Impl::reply(res, svc.next_task(req.has_param("judge") ? req.get_param_value("judge") : std::string()));
  });
  server.Get(R"(/api/tasks/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    Impl::reply(res, svc.task(req.matches[1], req.has_param("judge") ? req.get_param_value("judge") : std::string()));
  });
  server.Post("/api/ratings", [&svc](const httplib::Request& req, httplib::Response& res) {
    Impl::reply(res, svc.submit(req.body));
  });
  server.Get("/api/progress", [&svc](const httplib::Request&, httplib::Response& res) {
    Impl::reply(res, svc.progress());
  });
  server.Get("/api/labels", [&svc](const httplib::Request&, httplib::Response& res) {
    Impl::reply(res, {200, svc.labels()});
  });
  server.Get("/api/export", [&svc](const httplib::Request&, httplib::Response& res) {
    try {
      res.set_content(svc.export_csv(), "text/csv; charset=utf-8");
    } catch (const std::exception& e) {
      Impl::reply(res, {500, {{"error", e.what()}}});
    }
  });
  if (!static_dir.empty()) {
    if (!server.set_mount_point("/", static_dir.string())) {
      fail(ErrorKind::io, "static directory not found: " + static_dir.string());
    }
  }
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  auto& server = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host.c_str());
    if (bound < 0) fail(ErrorKind::io, "cannot bind " + host);
  } else if (!server.bind_to_port(host.c_str(), port)) {
    fail(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpService::run() {
  if (!impl_->server.listen_after_bind()) fail(ErrorKind::io, "HTTP server stopped with an error");
}

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpService::running() const { return impl_->server.is_running(); }

}  // namespace mtqual
