// Copyright 2026 The CareLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP front end of a Node. Every route is under /v1 and speaks JSON, except
// the multipart uploads and the decrypted file download. Sessions travel as
// "Authorization: Bearer <token>".

#pragma once

#include <memory>
#include <string>

#include "careledger/service/node.hpp"
#include "careledger/service/session.hpp"

namespace careledger::service {

class HttpService {
 public:
  HttpService(Node& node, SessionStore& sessions);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  // serve() on a background thread; returns once the socket is listening.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace careledger::service
