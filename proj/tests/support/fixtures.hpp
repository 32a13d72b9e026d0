#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/gateway/lakehouse.hpp"
#include "lake/gateway/server.hpp"
#include "lake/storage/object_store.hpp"

namespace lake::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct DeploymentOptions {
  gateway::StoreKind store = gateway::StoreKind::kMemory;
  std::chrono::seconds ticket_ttl{900};
  std::chrono::seconds download_ttl{900};
  bool open_registration = true;
  std::vector<std::string> local_buckets{"lab"};
};

/// A Lakehouse on a manual clock, temp storage, cheap password hashing.
class Deployment {
 public:
  explicit Deployment(DeploymentOptions options = {});

  gateway::Lakehouse& lake() { return *lake_; }
  ManualClock& clock() { return *clock_; }
  const std::filesystem::path& root() const { return dir_.path(); }
  const std::string& secret_key() const { return secret_key_; }

  /// Creates a user through the deployment's data manager, bootstrapping one first.
  governance::Principal add_user(const std::string& login, Role role);
  std::string token_for(const std::string& login);
  static constexpr const char* kPassword = "correct horse battery";

  governance::Principal& data_manager();

 private:
  TempDir dir_;
  std::shared_ptr<ManualClock> clock_;
  std::string secret_key_;
  std::unique_ptr<gateway::Lakehouse> lake_;
  std::optional<governance::Principal> dm_;
};

/// Wraps an adapter; when `unreachable` is set every call is a transport error.
class FlakyStore final : public storage::ObjectStore {
 public:
  explicit FlakyStore(std::shared_ptr<storage::ObjectStore> inner) : inner_(std::move(inner)) {}

  std::atomic<bool> unreachable{false};

  bool exists(std::string_view path) override;
  std::optional<std::uint64_t> size(std::string_view path) override;
  void remove(std::string_view path) override;
  void write(std::string_view path, std::span<const std::uint8_t> bytes) override;
  Bytes read(std::string_view path) override;
  std::vector<std::string> list(std::string_view prefix = {}) override;
  std::string upload_url(std::string_view ticket_id, std::string_view path) override;
  std::string download_url(std::string_view grant_id, std::string_view path) override;

 private:
  void check() const;
  std::shared_ptr<storage::ObjectStore> inner_;
};

/// Process-local object store for catalogue-scale tests.
class MemoryObjectStore final : public storage::ObjectStore {
 public:
  bool exists(std::string_view path) override;
  std::optional<std::uint64_t> size(std::string_view path) override;
  void remove(std::string_view path) override;
  void write(std::string_view path, std::span<const std::uint8_t> bytes) override;
  Bytes read(std::string_view path) override;
  std::vector<std::string> list(std::string_view prefix = {}) override;
  std::string upload_url(std::string_view ticket_id, std::string_view path) override;
  std::string download_url(std::string_view grant_id, std::string_view path) override;

 private:
  std::mutex mutex_;
  std::map<std::string, Bytes, std::less<>> objects_;
};

/// Minimal HTTP client for gateway tests.
struct HttpResult {
  int status = 0;
  nlohmann::json body;
  std::string raw;
};

class Http {
 public:
  explicit Http(std::string base_url) : base_(std::move(base_url)) {}

  void set_token(std::optional<std::string> token) { token_ = std::move(token); }
  HttpResult call(const std::string& method, const std::string& path,
                  const std::optional<nlohmann::json>& body = std::nullopt) const;
  HttpResult call_raw(const std::string& method, const std::string& path, const std::string& body,
                      const std::string& content_type) const;
  /// Absolute URL, e.g. a ticket's upload_url.
  HttpResult put_url(const std::string& url, const std::string& bytes) const;
  HttpResult get_url(const std::string& url) const;

 private:
  std::string base_;
  std::optional<std::string> token_;
};

/// RFC 4180 delimiter-separated text.
std::string to_csv(const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace lake::testing
