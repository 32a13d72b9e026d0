#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/common/types.hpp"
#include "lake/governance/credentials.hpp"
#include "lake/governance/users.hpp"
#include "lake/storage/object_store.hpp"
#include "lake/store/document_store.hpp"

namespace lake::storage {

struct StorageTarget {
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
  std::optional<std::string> credential_id;
  std::optional<std::string> endpoint;
  Timestamp registered_at;
};

nlohmann::json to_public_json(const StorageTarget& target);

/// Bucket names are embedded in object-store paths: [A-Za-z0-9._-]{1,63}.
bool is_valid_bucket_name(std::string_view bucket);

using AdapterFactory = std::function<std::shared_ptr<ObjectStore>(const StorageTarget&)>;

/// Registered storage targets and their adapters.
class TargetRegistry {
 public:
  struct Options {
    /// Local buckets live at <local_root>/<bucket> unless overridden.
    std::filesystem::path local_root = "lake-data/objects";
    std::map<std::string, std::filesystem::path, std::less<>> local_root_overrides;
    std::string public_base_url = "http://127.0.0.1:8080";
  };

  TargetRegistry(store::DocumentStore& store, const Clock& clock,
                 const governance::CredentialService& credentials, Options options);

  /// Replaces the default adapter construction; used to inject faults.
  void set_adapter_factory(AdapterFactory factory);
  /// Base of the raw-transfer URLs handed out by local adapters.
  void set_public_base_url(std::string url);
  std::string public_base_url() const;

  /// Data-manager only. Non-local targets need a credential of the same type.
  StorageTarget register_target(const governance::Principal& actor, StorageType type, std::string bucket,
                                std::optional<std::string> credential_id,
                                std::optional<std::string> endpoint = std::nullopt);
  /// Deployment-time registration from the service config; idempotent.
  StorageTarget ensure_target(StorageType type, std::string bucket, std::optional<std::string> credential_id,
                              std::optional<std::string> endpoint = std::nullopt);

  std::vector<StorageTarget> list() const;
  std::optional<StorageTarget> find(StorageType type, std::string_view bucket) const;

  /// Not-found for unregistered targets.
  std::shared_ptr<ObjectStore> adapter(StorageType type, std::string_view bucket);

 private:
  std::shared_ptr<ObjectStore> make_default_adapter(const StorageTarget& target) const;
  void validate(StorageType type, const std::string& bucket, const std::optional<std::string>& credential_id) const;

  store::DocumentStore& store_;
  const Clock& clock_;
  const governance::CredentialService& credentials_;
  Options options_;

  mutable std::mutex adapters_mutex_;
  AdapterFactory factory_;
  std::map<std::string, std::shared_ptr<ObjectStore>, std::less<>> adapters_;
};

}  // namespace lake::storage
