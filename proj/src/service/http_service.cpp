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

#include "careledger/service/http_service.hpp"

#include <thread>

#include <httplib.h>

#include "careledger/service/node_gateway.hpp"
#include "careledger/service/wire.hpp"

namespace careledger::service {

using careflow::AccessDenied;
using careflow::IntegrityError;
using careflow::ValidationError;
using contract::ContractError;
using contract::Errc;
using httplib::Request;
using httplib::Response;

namespace {

constexpr std::size_t kMaxPayload = 64u << 20;

void send_json(Response& res, int status, const Json& j) {
  res.status = status;
  res.set_content(canonical(j), "application/json");
}

void send_error(Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, status, error_body(code, message));
}

Json list_json(const auto& items) {
  Json arr = Json::array();
  for (const auto& it : items) arr.push_back(contract::to_json(it));
  return arr;
}

Digest path_hash(const Request& req, const char* name) {
  try {
    return Digest::from_hex(req.path_params.at(name));
  } catch (const crypto::DecodeError& e) {
    throw FormatError(std::string(name) + " is not a 64-character hex digest");
  }
}

Transaction body_tx(const Request& req, std::string_view expected_type) {
  const Json j = jf::parse(req.body);
  Transaction tx = transaction_from_json(jf::at(j, "tx"));
  if (payload_type(tx.payload) != expected_type) {
    throw FormatError("this endpoint takes a " + std::string(expected_type) + " transaction");
  }
  return tx;
}

std::optional<crypto::FileKey> key_header(const Request& req) {
  if (!req.has_header(kFileKeyHeader)) return std::nullopt;
  return crypto::FileKey::from_hex(req.get_header_value(kFileKeyHeader));
}

std::optional<std::string> query(const Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

}  // namespace

struct HttpService::Impl {
  Node& node;
  SessionStore& sessions;
  httplib::Server server;
  std::thread thread;

  Impl(Node& n, SessionStore& s) : node(n), sessions(s) {
    server.set_payload_max_length(kMaxPayload);
    routes();
  }

  std::string viewer(const Request& req) {
    const std::string auth = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (!auth.starts_with(prefix)) throw AuthError(contract::kNotAuthenticated);
    auto s = sessions.lookup(auth.substr(prefix.size()));
    if (!s || contract::find_active(node.snapshot()->state, s->user_id) == nullptr) {
      throw AuthError(contract::kNotAuthenticated);
    }
    return s->user_id;
  }

  NodeGateway gateway(const Request& req) { return NodeGateway(node, viewer(req)); }

  template <typename F>
  auto guarded(F f) {
    return [f](const Request& req, Response& res) {
      try {
        f(req, res);
      } catch (const AuthError& e) {
        send_error(res, 401, "Unauthenticated", e.what());
      } catch (const ContractError& e) {
        send_error(res, e.code() == Errc::unauthenticated ? 401 : 422, contract::to_string(e.code()),
                   e.what());
      } catch (const AccessDenied& e) {
        send_error(res, 403, "AccessDenied", e.what());
      } catch (const IntegrityError& e) {
        Json body = error_body("IntegrityError", e.what());
        body["report"] = to_json(e.report());
        send_json(res, 409, body);
      } catch (const ValidationError& e) {
        send_error(res, 400, "ValidationError", e.what());
      } catch (const FormatError& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const crypto::DecodeError& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const crypto::CryptoError& e) {
        send_error(res, 422, "CryptoError", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void submit_tx(Response& res, NodeGateway& gw, const Transaction& tx) {
    send_json(res, 200, to_json(gw.submit(tx)));
  }

  // Multipart upload: parts "kind", "owner", "bytes" (sealed blob), "tx".
  void upload(const Request& req, Response& res, bool motion) {
    NodeGateway gw = gateway(req);
    if (!req.is_multipart_form_data()) throw FormatError("expected multipart/form-data");
    for (const char* part : {"kind", "owner", "bytes", "tx"}) {
      if (!req.has_file(part)) throw FormatError(std::string("missing part '") + part + "'");
    }
    const Transaction tx = transaction_from_json(jf::parse(req.get_file_value("tx").content));
    const auto* p = std::get_if<StoreFileHash>(&tx.payload);
    if (p == nullptr) throw FormatError("the tx part must be a store_file_hash transaction");
    auto kind = parse_file_kind(req.get_file_value("kind").content);
    if (!kind || *kind != p->kind || req.get_file_value("owner").content != p->owner_patient) {
      throw FormatError("kind/owner parts do not match the transaction");
    }
    if (motion) {
      const auto* me = contract::find_active(node.snapshot()->state, gw.viewer());
      if (me == nullptr || me->role != Role::iot_device || p->kind != FileKind::motion_capture) {
        throw AccessDenied("/motion takes motion_capture uploads from iot_device sessions");
      }
    }
    const std::string& bytes = req.get_file_value("bytes").content;
    const careflow::Receipt r = gw.submit_file(crypto::as_bytes(bytes), tx);
    Json body = to_json(r);
    body["content_hash"] = p->content_hash.hex();
    send_json(res, 200, body);
  }

  void routes() {
    server.Get("/v1/status", guarded([this](const Request&, Response& res) {
      NodeGateway gw(node, "");
      send_json(res, 200, to_json(gw.status()));
    }));

    server.Post("/v1/register", guarded([this](const Request& req, Response& res) {
      const Transaction tx = body_tx(req, "request_registration");
      const careflow::Receipt r = node.submit(tx);
      Json body = to_json(r);
      body["pending_id"] = std::get<RequestRegistration>(tx.payload).user_id;
      send_json(res, 200, body);
    }));

    server.Get("/v1/pending", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, list_json(gateway(req).pending()));
    }));

    server.Post("/v1/pending/:id/approve", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Transaction tx = body_tx(req, "register_user");
      if (std::get<RegisterUser>(tx.payload).user_id != req.path_params.at("id")) {
        throw FormatError("transaction approves a different user");
      }
      submit_tx(res, gw, tx);
    }));

    server.Post("/v1/login/challenge", guarded([this](const Request& req, Response& res) {
      const Json j = jf::parse(req.body);
      const std::string nonce = sessions.challenge(node.snapshot()->state, jf::str(j, "user_id"));
      send_json(res, 200, Json{{"nonce", nonce}});
    }));

    server.Post("/v1/login/respond", guarded([this](const Request& req, Response& res) {
      const Json j = jf::parse(req.body);
      const Session s = sessions.respond(node.snapshot()->state, jf::str(j, "user_id"),
                                         jf::str(j, "nonce"), jf::hex_bytes(j, "signature"));
      send_json(res, 200,
                Json{{"token", s.token}, {"user_id", s.user_id}, {"expires_at_ms", s.expires_at_ms}});
    }));

    server.Get("/v1/users", guarded([this](const Request& req, Response& res) {
      std::optional<Role> role;
      if (auto r = query(req, "role")) {
        role = parse_role(*r);
        if (!role) throw FormatError("unknown role '" + *r + "'");
      }
      send_json(res, 200, list_json(gateway(req).users(role)));
    }));

    server.Get("/v1/users/:id", guarded([this](const Request& req, Response& res) {
      auto u = gateway(req).user(req.path_params.at("id"));
      if (!u) return send_error(res, 404, "NotFound", "no active user '" + req.path_params.at("id") + "'");
      send_json(res, 200, contract::to_json(*u));
    }));

    server.Get("/v1/physicians", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, list_json(gateway(req).users(Role::physician)));
    }));

    server.Post("/v1/files", guarded([this](const Request& req, Response& res) {
      upload(req, res, false);
    }));
    server.Post("/v1/motion", guarded([this](const Request& req, Response& res) {
      upload(req, res, true);
    }));

    server.Get("/v1/files", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, list_json(gateway(req).files(query(req, "patient"))));
    }));

    server.Get("/v1/files/:hash", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Digest h = path_hash(req, "hash");
      const contract::FetchDecision d = gw.file_key(h);
      if (const auto* deny = std::get_if<contract::Deny>(&d)) throw AccessDenied(deny->reason);
      const auto key = key_header(req);
      if (!key) throw FormatError(std::string("missing ") + kFileKeyHeader + " header");
      const crypto::Bytes plaintext = gw.open_file(h, *key);
      res.status = 200;
      res.set_content(std::string(crypto::as_chars(plaintext)), "application/octet-stream");
    }));

    server.Get("/v1/files/:hash/meta", guarded([this](const Request& req, Response& res) {
      const Digest h = path_hash(req, "hash");
      auto f = gateway(req).file(h);
      if (!f) return send_error(res, 404, "UnknownFile", "unknown file " + h.hex());
      send_json(res, 200, contract::to_json(*f));
    }));

    server.Get("/v1/files/:hash/key", guarded([this](const Request& req, Response& res) {
      const contract::FetchDecision d = gateway(req).file_key(path_hash(req, "hash"));
      if (const auto* deny = std::get_if<contract::Deny>(&d)) throw AccessDenied(deny->reason);
      send_json(res, 200, Json{{"wrapped_key", wrapped_key_to_json(std::get<contract::Allow>(d).wrapped_key)}});
    }));

    server.Post("/v1/files/:hash/share", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Transaction tx = body_tx(req, "grant_access");
      if (std::get<GrantAccess>(tx.payload).content_hash != path_hash(req, "hash")) {
        throw FormatError("transaction names a different file");
      }
      submit_tx(res, gw, tx);
    }));

    server.Post("/v1/files/:hash/revoke", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Transaction tx = body_tx(req, "revoke_access");
      if (std::get<RevokeAccess>(tx.payload).content_hash != path_hash(req, "hash")) {
        throw FormatError("transaction names a different file");
      }
      submit_tx(res, gw, tx);
    }));

    server.Get("/v1/files/:hash/integrity", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, to_json(gateway(req).integrity(path_hash(req, "hash"), key_header(req))));
    }));

    server.Get("/v1/dose-requests", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, list_json(gateway(req).dose_requests(query(req, "patient"))));
    }));

    server.Post("/v1/dose-requests", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      submit_tx(res, gw, body_tx(req, "open_dose_request"));
    }));

    server.Post("/v1/dose-requests/:id/prescribe", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Transaction tx = body_tx(req, "record_prescription");
      if (std::get<RecordPrescription>(tx.payload).request != path_hash(req, "id")) {
        throw FormatError("transaction decides a different request");
      }
      submit_tx(res, gw, tx);
    }));

    server.Get("/v1/patients/:id/last-dose", guarded([this](const Request& req, Response& res) {
      const auto dose = gateway(req).last_approved_dose(req.path_params.at("id"));
      send_json(res, 200, Json{{"dose_mg", dose ? Json(*dose) : Json(nullptr)}});
    }));

    server.Post("/v1/emergency", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      submit_tx(res, gw, body_tx(req, "emergency_dose_request"));
    }));

    server.Post("/v1/emergency/:id/decide", guarded([this](const Request& req, Response& res) {
      NodeGateway gw = gateway(req);
      const Transaction tx = body_tx(req, "emergency_decision");
      if (std::get<EmergencyDecision>(tx.payload).request_tx != path_hash(req, "id")) {
        throw FormatError("transaction decides a different request");
      }
      submit_tx(res, gw, tx);
    }));

    server.Get("/v1/chain/verify", guarded([this](const Request&, Response& res) {
      send_json(res, 200, node.verify_chain().to_json());
    }));
  }
};

HttpService::HttpService(Node& node, SessionStore& sessions)
    : impl_(std::make_unique<Impl>(node, sessions)) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpService::serve() { impl_->server.listen_after_bind(); }

void HttpService::start() {
  impl_->thread = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
}

void HttpService::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace careledger::service
