#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/types.hpp"
#include "lake/governance/password.hpp"

namespace lake::gateway {

struct TargetConfig {
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
  /// Local buckets only; defaults to <local_storage_root>/<bucket>.
  std::optional<std::filesystem::path> root_dir;
  std::optional<std::string> credential_id;
  std::optional<std::string> endpoint;
};

enum class StoreKind { kSqlite, kMemory };

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Base of raw-transfer URLs. Empty: derived from the bound address.
  std::string public_base_url;

  StoreKind store_kind = StoreKind::kSqlite;
  std::filesystem::path store_path = "lake-data/catalogue.db";
  std::filesystem::path local_storage_root = "lake-data/objects";

  std::chrono::seconds ticket_ttl{900};
  std::chrono::seconds download_ttl{900};
  std::chrono::seconds token_ttl{12 * 3600};
  double purge_grace_factor = 2.0;
  /// 0 disables the periodic sweep.
  std::chrono::seconds janitor_interval{60};

  bool open_registration = true;
  governance::ScryptParams password_hash;
  std::vector<TargetConfig> targets;

  /// Relative paths are resolved against `base_dir`.
  static Config from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& file);
};

}  // namespace lake::gateway
