#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/error.hpp"
#include "lake/gateway/lakehouse.hpp"

namespace lake::gateway {

struct Route {
  std::string_view method;
  /// Path with {param} placeholders.
  std::string_view path;
};

/// Every public endpoint, in registration order.
const std::vector<Route>& route_table();

int http_status(ErrorCode code);
nlohmann::json error_envelope(const Error& error);
/// First field name from the response deny-list found anywhere in `doc`.
std::optional<std::string> find_secret_field(const nlohmann::json& doc);

/// HTTP front end over one Lakehouse.
class Server {
 public:
  explicit Server(Lakehouse& lake);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the configured host and port (0 picks a free port). When the
  /// config has no public_base_url, transfer URLs follow the bound address.
  int bind();
  /// Serves on a background thread; requires bind().
  void start();
  /// Serves on the calling thread until stop(); requires bind().
  void run();
  void stop();

  int port() const;
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lake::gateway
