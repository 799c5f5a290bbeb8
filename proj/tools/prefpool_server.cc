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

// Session service for human decision makers: the JSON API plus the static
// web UI bundle.

#include <CLI11.hpp>
#include <signal.h>

#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "prefpool/service/http_server.h"
#include "prefpool/service/service.h"

int main(int argc, char** argv) {
  CLI::App app{"Preference elicitation session service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  prefpool::ServiceOptions options;
  options.state_dir = "sessions";
  app.add_option("--host", host, "listen address");
  app.add_option("--port", port, "listen port; 0 picks a free one")
      ->check(CLI::Range(0, 65535));
  app.add_option("--state-dir", options.state_dir,
                 "session persistence directory; empty disables it");
  app.add_option("--static-dir", static_dir, "web UI bundle served under /");
  app.add_option("--max-pool-size", options.max_pool_size)
      ->check(CLI::PositiveNumber);
  app.add_option("--async-synthesis-nodes", options.async_synthesis_min_nodes,
                 "PC-TSP node count from which synthesis runs as a job")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  // Signals are taken synchronously by one thread; every other thread
  // inherits the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    prefpool::SessionService service(options);
    std::vector<std::string> errors;
    const int restored = service.Restore(&errors);
    for (const std::string& e : errors) {
      std::cerr << "warning: not restored: " << e << "\n";
    }
    prefpool::HttpServer server(service, static_dir);
    const int bound = server.Bind(host, port);
    std::cout << "listening on http://" << host << ":" << bound << " ("
              << restored << " sessions restored)" << std::endl;
    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      server.Stop();
    });
    server.Listen();
    if (waiter.joinable()) {
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
    }
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
