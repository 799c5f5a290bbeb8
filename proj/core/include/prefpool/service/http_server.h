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

#ifndef PREFPOOL_SERVICE_HTTP_SERVER_H_
#define PREFPOOL_SERVICE_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "prefpool/service/service.h"

namespace prefpool {

// JSON-over-HTTP front end of a SessionService.
//
//   POST /api/sessions                      create
//   GET  /api/sessions/{id}/query           pending query (idempotent)
//   POST /api/sessions/{id}/answer          {query_id, label}
//   GET  /api/sessions/{id}/state           weights and counters
//   POST /api/sessions/{id}/synthesize      {instance_id}
//   GET  /api/jobs/{id}                     background synthesis status
//
// Anything else under / is served from `static_dir` when one is given.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service, std::string static_dir = "");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws std::runtime_error on failure.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Requires a prior Bind().
  void Listen();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace prefpool

#endif  // PREFPOOL_SERVICE_HTTP_SERVER_H_
