#include "lake/gateway/server.hpp"

#include <atomic>
#include <functional>
#include <regex>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "lake/gateway/facades.hpp"

namespace lake::gateway {

using nlohmann::json;

const std::vector<Route>& route_table() {
  static const std::vector<Route> routes{
      {"POST", "/auth/login"},
      {"POST", "/users"},
      {"PATCH", "/users/{id}"},
      {"DELETE", "/users/{id}"},
      {"POST", "/users/{id}/password-reset"},
      {"GET", "/collections"},
      {"POST", "/collections"},
      {"GET", "/collections/{id}"},
      {"GET", "/collections/{id}/files"},
      {"GET", "/files/search"},
      {"POST", "/files/search"},
      {"POST", "/files/upload-request"},
      {"POST", "/files/{id}/commit"},
      {"GET", "/files/{id}/download-url"},
      {"GET", "/buckets"},
      {"POST", "/buckets"},
      {"POST", "/credentials"},
      {"POST", "/access-requests"},
      {"GET", "/access-requests"},
      {"POST", "/access-requests/{id}/decision"},
      {"POST", "/visas/{id}/grants"},
      {"DELETE", "/visas/{id}/grants/{user_id}"},
      {"POST", "/admin/janitor/sweep"},
      {"PUT", "/raw/{ticket_id}"},
      {"GET", "/raw/{grant_id}"},
  };
  return routes;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return 422;
    case ErrorCode::kAuthentication: return 401;
    case ErrorCode::kForbidden: return 403;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kPreconditionFailed: return 412;
    case ErrorCode::kTransport: return 502;
    case ErrorCode::kInternal: return 500;
  }
  return 500;
}

json error_envelope(const Error& error) {
  json details = json::array();
  for (const auto& d : error.details()) details.push_back({{"field", d.field}, {"issue", d.issue}});
  return {{"error", {{"code", to_string(error.code())}, {"message", error.what()}, {"details", details}}}};
}

std::optional<std::string> find_secret_field(const json& doc) {
  static const std::vector<std::string> deny{"password",   "password_hash", "new_password", "ciphertext",
                                             "salt",       "secret",        "secret_key",   "signing_key",
                                             "encryption_key"};
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (std::ranges::find(deny, key) != deny.end()) return key;
      if (auto nested = find_secret_field(value)) return nested;
    }
  } else if (doc.is_array()) {
    for (const auto& item : doc) {
      if (auto nested = find_secret_field(item)) return nested;
    }
  }
  return std::nullopt;
}

namespace {

struct Reply {
  int status = 200;
  json data;
};

std::string to_httplib_pattern(std::string_view path) {
  static const std::regex param(R"(\{([a-z_]+)\})");
  return std::regex_replace(std::string(path), param, ":$1");
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  if (e.code() == ErrorCode::kInternal) {
    send_json(res, 500, error_envelope(Error(ErrorCode::kInternal, "internal error")));
    return;
  }
  send_json(res, http_status(e.code()), error_envelope(e));
}

/// Runs `fn`, mapping every failure onto the error envelope.
void guarded(const httplib::Request& req, httplib::Response& res, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInternal) spdlog::error("{} {}: {}", req.method, req.path, e.what());
    send_error(res, e);
  } catch (const std::exception& e) {
    spdlog::error("{} {}: unhandled: {}", req.method, req.path, e.what());
    send_error(res, Error(ErrorCode::kInternal, "internal error"));
  }
}

std::optional<std::string> bearer_token(const httplib::Request& req) {
  if (!req.has_header("Authorization")) return std::nullopt;
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) {
    fail(ErrorCode::kAuthentication, "malformed Authorization header");
  }
  return header.substr(prefix.size());
}

std::optional<std::string> query_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

}  // namespace

struct Server::Impl {
  explicit Impl(Lakehouse& l) : lake(l), governance(l), catalogue(l), storage(l), janitor(l) {}

  Lakehouse& lake;
  GovernanceFacade governance;
  CatalogueFacade catalogue;
  StorageFacade storage;
  JanitorFacade janitor;
  httplib::Server http;
  std::thread thread;
  std::atomic<int> port{-1};

  Principal require_auth(const httplib::Request& req) const {
    const auto token = bearer_token(req);
    if (!token) fail(ErrorCode::kAuthentication, "authentication required");
    return governance.authenticate(*token);
  }

  std::optional<Principal> optional_auth(const httplib::Request& req) const {
    const auto token = bearer_token(req);
    if (!token) return std::nullopt;
    return governance.authenticate(*token);
  }

  using JsonHandler = std::function<Reply(const httplib::Request&)>;

  void add(std::string_view method, std::string_view path, JsonHandler handler) {
    const auto pattern = to_httplib_pattern(path);
    auto wrapped = [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&] {
        if (req.body.size() > kMaxMetadataBody) throw validation_error("body", "larger than 10 MiB");
        auto reply = handler(req);
        json envelope{{"data", std::move(reply.data)}};
        if (auto field = find_secret_field(envelope)) {
          spdlog::error("{} {}: response carried deny-listed field '{}'", req.method, req.path, *field);
          fail(ErrorCode::kInternal, "response withheld");
        }
        send_json(res, reply.status, envelope);
      });
    };
    if (method == "GET") {
      http.Get(pattern, wrapped);
    } else if (method == "POST") {
      http.Post(pattern, wrapped);
    } else if (method == "PATCH") {
      http.Patch(pattern, wrapped);
    } else if (method == "DELETE") {
      http.Delete(pattern, wrapped);
    }
  }

  void register_routes() {
    const auto page_of = [](const httplib::Request& req) {
      return parse_page([&](const std::string& n) { return query_param(req, n); });
    };
    const auto param = [](const httplib::Request& req, const char* name) { return req.path_params.at(name); };

    add("POST", "/auth/login", [this](const auto& req) {
      return Reply{200, governance.login(parse_login(parse_body(req.body)))};
    });
    add("POST", "/users", [this](const auto& req) {
      auto payload = parse_create_user(parse_body(req.body));
      return Reply{201, governance.create_user(optional_auth(req), std::move(payload))};
    });
    add("PATCH", "/users/{id}", [this, param](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{200, governance.update_user(caller, param(req, "id"), parse_update_user(parse_body(req.body)))};
    });
    add("DELETE", "/users/{id}", [this, param](const auto& req) {
      return Reply{200, governance.delete_user(require_auth(req), param(req, "id"))};
    });
    add("POST", "/users/{id}/password-reset", [this, param](const auto& req) {
      auto payload = parse_password_reset(parse_body(req.body));
      const auto caller = payload.reset_token ? std::nullopt : optional_auth(req);
      return Reply{200, governance.password_reset(caller, param(req, "id"), std::move(payload))};
    });

    add("GET", "/collections", [this, page_of](const auto& req) {
      require_auth(req);
      return Reply{200, catalogue.list_collections(page_of(req))};
    });
    add("POST", "/collections", [this](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{201, catalogue.create_collection(caller, parse_create_collection(parse_body(req.body)))};
    });
    add("GET", "/collections/{id}", [this, param](const auto& req) {
      return Reply{200, catalogue.show_collection(require_auth(req), param(req, "id"))};
    });
    add("GET", "/collections/{id}/files", [this, param, page_of](const auto& req) {
      require_auth(req);
      return Reply{200, catalogue.list_files(param(req, "id"), page_of(req))};
    });

    add("GET", "/files/search", [this, page_of](const auto& req) {
      require_auth(req);
      const auto keyword = query_param(req, "keyword");
      if (!keyword) throw validation_error("keyword", "required");
      return Reply{200, catalogue.basic_search(*keyword, page_of(req))};
    });
    add("POST", "/files/search", [this](const auto& req) {
      require_auth(req);
      return Reply{200, catalogue.advanced_search(parse_advanced_search(parse_body(req.body)))};
    });
    add("POST", "/files/upload-request", [this](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{201, catalogue.upload_request(caller, parse_upload_request(parse_body(req.body)))};
    });
    add("POST", "/files/{id}/commit", [this, param](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{200, catalogue.commit(caller, param(req, "id"), parse_commit(parse_body(req.body)))};
    });
    add("GET", "/files/{id}/download-url", [this, param](const auto& req) {
      return Reply{200, storage.download_url(require_auth(req), param(req, "id"))};
    });

    add("GET", "/buckets", [this](const auto& req) {
      require_auth(req);
      return Reply{200, storage.list_buckets()};
    });
    add("POST", "/buckets", [this](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{201, storage.register_bucket(caller, parse_register_bucket(parse_body(req.body)))};
    });
    add("POST", "/credentials", [this](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{201, governance.add_credential(caller, parse_credential(parse_body(req.body)))};
    });

    add("POST", "/access-requests", [this](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{201, governance.submit_request(caller, parse_access_request(parse_body(req.body)))};
    });
    add("GET", "/access-requests", [this](const auto& req) {
      return Reply{200, governance.list_requests(require_auth(req), query_param(req, "collection"))};
    });
    add("POST", "/access-requests/{id}/decision", [this, param](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{200, governance.decide_request(caller, param(req, "id"), parse_decision(parse_body(req.body)))};
    });
    add("POST", "/visas/{id}/grants", [this, param](const auto& req) {
      const auto caller = require_auth(req);
      return Reply{200, governance.grant(caller, param(req, "id"), parse_grant(parse_body(req.body)))};
    });
    add("DELETE", "/visas/{id}/grants/{user_id}", [this, param](const auto& req) {
      return Reply{200, governance.revoke(require_auth(req), param(req, "id"), param(req, "user_id"))};
    });
    add("POST", "/admin/janitor/sweep", [this](const auto& req) {
      return Reply{200, janitor.sweep(require_auth(req))};
    });

    http.Put(to_httplib_pattern("/raw/{ticket_id}"), [this](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&] {
        const auto& body = req.body;
        auto data = storage.accept_upload(req.path_params.at("ticket_id"),
                                          {reinterpret_cast<const std::uint8_t*>(body.data()), body.size()});
        send_json(res, 200, json{{"data", std::move(data)}});
      });
    });
    http.Get(to_httplib_pattern("/raw/{grant_id}"), [this](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&] {
        const auto bytes = storage.serve_download(req.path_params.at("grant_id"));
        res.status = 200;
        res.set_content(std::string(bytes.begin(), bytes.end()), "application/octet-stream");
      });
    });

    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_json(res, 404, error_envelope(Error(ErrorCode::kNotFound, "no route for " + req.method + " " + req.path)));
      } else if (res.status == 413) {
        send_json(res, 413, error_envelope(validation_error("body", "request too large")));
      }
    });
  }
};

Server::Server(Lakehouse& lake) : impl_(std::make_unique<Impl>(lake)) {
  impl_->http.set_payload_max_length(std::size_t{4} << 30);
  impl_->register_routes();
}

Server::~Server() { stop(); }

int Server::bind() {
  const auto& c = impl_->lake.config();
  int port = c.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(c.host);
  } else if (!impl_->http.bind_to_port(c.host, port)) {
    port = -1;
  }
  if (port < 0) fail(ErrorCode::kTransport, "cannot bind " + c.host + ":" + std::to_string(c.port));
  impl_->port = port;
  if (c.public_base_url.empty()) impl_->lake.targets.set_public_base_url(base_url());
  return port;
}

void Server::start() {
  if (impl_->port < 0) bind();
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void Server::run() {
  if (impl_->port < 0) bind();
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Server::port() const { return impl_->port; }

std::string Server::base_url() const {
  return "http://" + impl_->lake.config().host + ":" + std::to_string(impl_->port);
}

}  // namespace lake::gateway
