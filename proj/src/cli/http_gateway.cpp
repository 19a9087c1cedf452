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

#include "careledger/cli/http_gateway.hpp"

#include <httplib.h>

#include "careledger/careflow/errors.hpp"
#include "careledger/service/session.hpp"
#include "careledger/service/wire.hpp"

namespace careledger::cli {

using contract::ContractError;
using contract::Errc;

namespace {

[[noreturn]] void raise(const httplib::Result& res) {
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  std::string code = "Unknown";
  std::string message = res->body;
  Json body;
  try {
    body = Json::parse(res->body);
    code = body.at("error").get<std::string>();
    message = body.at("message").get<std::string>();
  } catch (const Json::exception&) {
  }
  switch (res->status) {
    case 401: throw ContractError(Errc::unauthenticated, message);
    case 403: throw careflow::AccessDenied(message);
    case 409: {
      contract::IntegrityReport report;
      if (body.contains("report")) report = service::integrity_from_json(body["report"]);
      throw careflow::IntegrityError(report, message);
    }
    case 400: throw careflow::ValidationError(message);
    case 422:
      if (code == "CryptoError") throw crypto::CryptoError(message);
      if (auto e = contract::parse_errc(code)) throw ContractError(*e, message);
      break;
    default: break;
  }
  throw TransportError("HTTP " + std::to_string(res->status) + " " + code + ": " + message);
}

Json ok_json(const httplib::Result& res) {
  if (!res || res->status != 200) raise(res);
  return jf::parse(res->body);
}

template <typename T, typename F>
std::vector<T> list_of(const Json& arr, F decode) {
  if (!arr.is_array()) throw FormatError("expected a JSON array");
  std::vector<T> out;
  for (const auto& item : arr) out.push_back(decode(item));
  return out;
}

std::string tx_body(const Transaction& tx) { return canonical(Json{{"tx", to_json(tx)}}); }

}  // namespace

struct HttpGateway::Impl {
  httplib::Client client;
  explicit Impl(const std::string& base) : client(base) {
    client.set_connection_timeout(5);
    client.set_read_timeout(120);
    client.set_write_timeout(120);
  }
};

HttpGateway::HttpGateway(const std::string& base_url)
    : impl_(std::make_unique<Impl>(base_url)) {}

HttpGateway::~HttpGateway() = default;

namespace {

httplib::Headers auth(const std::string& token) {
  httplib::Headers h;
  if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
  return h;
}

}  // namespace

void HttpGateway::login(const crypto::KeyPair& me) {
  const Json c = ok_json(impl_->client.Post("/v1/login/challenge",
                                            canonical(Json{{"user_id", me.user_id}}),
                                            "application/json"));
  const std::string nonce = jf::str(c, "nonce");
  const crypto::Bytes sig =
      crypto::sign(me.sign_private, crypto::as_bytes(service::login_message(me.user_id, nonce)));
  const Json s = ok_json(impl_->client.Post(
      "/v1/login/respond",
      canonical(Json{{"user_id", me.user_id}, {"nonce", nonce}, {"signature", crypto::to_hex(sig)}}),
      "application/json"));
  token_ = jf::str(s, "token");
}

careflow::Receipt HttpGateway::request_registration(const Transaction& tx) {
  return service::receipt_from_json(
      ok_json(impl_->client.Post("/v1/register", tx_body(tx), "application/json")));
}

careflow::NodeStatus HttpGateway::status() {
  return service::status_from_json(ok_json(impl_->client.Get("/v1/status")));
}

careflow::Receipt HttpGateway::submit(const Transaction& tx) {
  std::string path;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RequestRegistration>) {
          path = "/v1/register";
        } else if constexpr (std::is_same_v<P, RegisterUser>) {
          path = "/v1/pending/" + p.user_id + "/approve";
        } else if constexpr (std::is_same_v<P, StoreFileHash>) {
          throw std::invalid_argument("store_file_hash goes through submit_file");
        } else if constexpr (std::is_same_v<P, GrantAccess>) {
          path = "/v1/files/" + p.content_hash.hex() + "/share";
        } else if constexpr (std::is_same_v<P, RevokeAccess>) {
          path = "/v1/files/" + p.content_hash.hex() + "/revoke";
        } else if constexpr (std::is_same_v<P, OpenDoseRequest>) {
          path = "/v1/dose-requests";
        } else if constexpr (std::is_same_v<P, RecordPrescription>) {
          path = "/v1/dose-requests/" + p.request.hex() + "/prescribe";
        } else if constexpr (std::is_same_v<P, EmergencyDoseRequest>) {
          path = "/v1/emergency";
        } else {
          path = "/v1/emergency/" + p.request_tx.hex() + "/decide";
        }
      },
      tx.payload);
  return service::receipt_from_json(
      ok_json(impl_->client.Post(path, auth(token_), tx_body(tx), "application/json")));
}

careflow::Receipt HttpGateway::submit_file(crypto::ByteView sealed_blob,
                                           const Transaction& store_tx) {
  const auto* p = std::get_if<StoreFileHash>(&store_tx.payload);
  if (p == nullptr) throw std::invalid_argument("submit_file takes a store_file_hash transaction");
  const httplib::MultipartFormDataItems items = {
      {"kind", std::string(to_string(p->kind)), "", ""},
      {"owner", p->owner_patient, "", ""},
      {"bytes", std::string(crypto::as_chars(sealed_blob)), "blob", "application/octet-stream"},
      {"tx", canonical(to_json(store_tx)), "", "application/json"},
  };
  const std::string path = p->kind == FileKind::motion_capture ? "/v1/motion" : "/v1/files";
  return service::receipt_from_json(ok_json(impl_->client.Post(path, auth(token_), items)));
}

std::optional<contract::UserRecord> HttpGateway::user(const std::string& user_id) {
  auto res = impl_->client.Get("/v1/users/" + user_id, auth(token_));
  if (res && res->status == 404) return std::nullopt;
  return contract::user_from_json(ok_json(res));
}

std::vector<contract::UserRecord> HttpGateway::users(std::optional<Role> role) {
  httplib::Params params;
  if (role) params.emplace("role", std::string(to_string(*role)));
  return list_of<contract::UserRecord>(
      ok_json(impl_->client.Get("/v1/users", params, auth(token_))), contract::user_from_json);
}

std::vector<contract::UserRecord> HttpGateway::pending() {
  return list_of<contract::UserRecord>(ok_json(impl_->client.Get("/v1/pending", auth(token_))),
                                       contract::user_from_json);
}

std::optional<contract::FileRecord> HttpGateway::file(const ContentHash& h) {
  auto res = impl_->client.Get("/v1/files/" + h.hex() + "/meta", auth(token_));
  if (res && res->status == 404) return std::nullopt;
  return contract::file_from_json(ok_json(res));
}

std::vector<contract::FileRecord> HttpGateway::files(std::optional<std::string> patient) {
  httplib::Params params;
  if (patient) params.emplace("patient", *patient);
  return list_of<contract::FileRecord>(
      ok_json(impl_->client.Get("/v1/files", params, auth(token_))), contract::file_from_json);
}

contract::FetchDecision HttpGateway::file_key(const ContentHash& h) {
  auto res = impl_->client.Get("/v1/files/" + h.hex() + "/key", auth(token_));
  if (res && res->status == 403) {
    try {
      return contract::Deny{Json::parse(res->body).at("message").get<std::string>()};
    } catch (const Json::exception&) {
      raise(res);
    }
  }
  return contract::Allow{wrapped_key_from_json(jf::at(ok_json(res), "wrapped_key"))};
}

crypto::Bytes HttpGateway::open_file(const ContentHash& h, const crypto::FileKey& key) {
  httplib::Headers headers = auth(token_);
  headers.emplace(service::kFileKeyHeader, key.hex());
  auto res = impl_->client.Get("/v1/files/" + h.hex(), headers);
  if (!res || res->status != 200) raise(res);
  const auto b = crypto::as_bytes(res->body);
  return crypto::Bytes(b.begin(), b.end());
}

contract::IntegrityReport HttpGateway::integrity(const ContentHash& h,
                                                 const std::optional<crypto::FileKey>& key) {
  httplib::Headers headers = auth(token_);
  if (key) headers.emplace(service::kFileKeyHeader, key->hex());
  return service::integrity_from_json(
      ok_json(impl_->client.Get("/v1/files/" + h.hex() + "/integrity", headers)));
}

std::vector<contract::DoseRequest> HttpGateway::dose_requests(std::optional<std::string> patient) {
  httplib::Params params;
  if (patient) params.emplace("patient", *patient);
  return list_of<contract::DoseRequest>(
      ok_json(impl_->client.Get("/v1/dose-requests", params, auth(token_))),
      contract::dose_request_from_json);
}

std::optional<double> HttpGateway::last_approved_dose(const std::string& patient) {
  const Json j = ok_json(impl_->client.Get("/v1/patients/" + patient + "/last-dose", auth(token_)));
  const Json& d = jf::at(j, "dose_mg");
  if (d.is_null()) return std::nullopt;
  return jf::num(j, "dose_mg");
}

ledger::ChainReport HttpGateway::verify_chain() {
  const Json j = ok_json(impl_->client.Get("/v1/chain/verify", auth(token_)));
  ledger::ChainReport r;
  r.valid = jf::boolean(j, "valid");
  if (jf::has(j, "first_bad_height") && !j["first_bad_height"].is_null()) {
    r.first_bad_height = jf::u64(j, "first_bad_height");
  }
  if (jf::has(j, "reason")) r.reason = jf::str(j, "reason");
  return r;
}

}  // namespace careledger::cli
