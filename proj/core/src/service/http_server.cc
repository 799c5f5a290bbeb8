// Copyright 2026 The prefpool Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prefpool/service/http_server.h"

#include <httplib.h>

#include <stdexcept>

namespace prefpool {
namespace {

constexpr const char* kJson = "application/json";

void Send(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), kJson);
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message) {
  Send(res, {status, {{"code", code}, {"message", message}}});
}

// Parses the request body; an empty body reads as {}.
bool ParseBody(const httplib::Request& req, httplib::Response& res,
               nlohmann::json& out) {
  if (req.body.empty()) {
    out = nlohmann::json::object();
    return true;
  }
  try {
    out = nlohmann::json::parse(req.body);
    return true;
  } catch (const nlohmann::json::parse_error& e) {
    SendError(res, 400, "bad_request", std::string("malformed JSON: ") + e.what());
    return false;
  }
}

}  // namespace

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  bool bound = false;

  explicit Impl(SessionService& s) : service(s) {}
};

HttpServer::HttpServer(SessionService& service, std::string static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& server = impl_->server;
  SessionService& svc = service;

  server.Post("/api/sessions", [&svc](const httplib::Request& req,
                                      httplib::Response& res) {
    nlohmann::json body;
    if (ParseBody(req, res, body)) Send(res, svc.CreateSession(body));
  });
  server.Get(R"(/api/sessions/([^/]+)/query)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               Send(res, svc.GetQuery(req.matches[1]));
             });
  server.Post(R"(/api/sessions/([^/]+)/answer)",
              [&svc](const httplib::Request& req, httplib::Response& res) {
                nlohmann::json body;
                if (ParseBody(req, res, body)) {
                  Send(res, svc.PostAnswer(req.matches[1], body));
                }
              });
  server.Get(R"(/api/sessions/([^/]+)/state)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               Send(res, svc.GetState(req.matches[1]));
             });
  server.Post(R"(/api/sessions/([^/]+)/synthesize)",
              [&svc](const httplib::Request& req, httplib::Response& res) {
                nlohmann::json body;
                if (ParseBody(req, res, body)) {
                  Send(res, svc.Synthesize(req.matches[1], body));
                }
              });
  server.Get(R"(/api/jobs/([^/]+))",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               Send(res, svc.GetJob(req.matches[1]));
             });
  const auto unknown = [](const httplib::Request& req,
                          httplib::Response& res) {
    SendError(res, 404, "not_found", "no route for " + req.method + " " +
                                         req.path);
  };
  server.Get(R"(/api/.*)", unknown);
  server.Post(R"(/api/.*)", unknown);

  server.set_exception_handler([](const httplib::Request&,
                                  httplib::Response& res,
                                  std::exception_ptr ep) {
    std::string message = "unknown error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    SendError(res, 500, "internal", message);
  });
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw std::runtime_error("static directory not found: " + static_dir);
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  httplib::Server& server = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw std::runtime_error("cannot bind " + host + ":" +
                             std::to_string(port));
  }
  impl_->bound = true;
  return bound;
}

void HttpServer::Listen() {
  if (!impl_->bound) throw std::runtime_error("Listen() before Bind()");
  impl_->server.listen_after_bind();
}

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace prefpool
