#include "lake/storage/targets.hpp"

#include <algorithm>
#include <cctype>

#include "lake/common/error.hpp"

namespace lake::storage {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

std::string target_key(StorageType type, std::string_view bucket) {
  return std::string(to_string(type)) + "/" + std::string(bucket);
}

json to_document(const StorageTarget& t) {
  json d{{"storage_type", to_string(t.storage_type)},
         {"bucket", t.bucket},
         {"registered_at", format_timestamp(t.registered_at)}};
  d["credential_id"] = t.credential_id ? json(*t.credential_id) : json(nullptr);
  d["endpoint"] = t.endpoint ? json(*t.endpoint) : json(nullptr);
  return d;
}

StorageTarget from_document(const json& d) {
  StorageTarget t;
  t.storage_type = parse_storage_type(d.at("storage_type").get<std::string>()).value_or(StorageType::kLocal);
  t.bucket = d.at("bucket").get<std::string>();
  if (d.contains("credential_id") && d["credential_id"].is_string()) t.credential_id = d["credential_id"].get<std::string>();
  if (d.contains("endpoint") && d["endpoint"].is_string()) t.endpoint = d["endpoint"].get<std::string>();
  t.registered_at = parse_timestamp(d.value("registered_at", "")).value_or(Timestamp{});
  return t;
}

}  // namespace

json to_public_json(const StorageTarget& t) { return to_document(t); }

bool is_valid_bucket_name(std::string_view bucket) {
  if (bucket.empty() || bucket.size() > 63 || bucket == "." || bucket == "..") return false;
  return std::all_of(bucket.begin(), bucket.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

TargetRegistry::TargetRegistry(store::DocumentStore& store, const Clock& clock,
                               const governance::CredentialService& credentials, Options options)
    : store_(store), clock_(clock), credentials_(credentials), options_(std::move(options)) {}

void TargetRegistry::set_adapter_factory(AdapterFactory factory) {
  std::lock_guard lock(adapters_mutex_);
  factory_ = std::move(factory);
  adapters_.clear();
}

void TargetRegistry::set_public_base_url(std::string url) {
  std::lock_guard lock(adapters_mutex_);
  options_.public_base_url = std::move(url);
  adapters_.clear();
}

std::string TargetRegistry::public_base_url() const {
  std::lock_guard lock(adapters_mutex_);
  return options_.public_base_url;
}

void TargetRegistry::validate(StorageType type, const std::string& bucket,
                              const std::optional<std::string>& credential_id) const {
  if (!is_valid_bucket_name(bucket)) throw validation_error("bucket", "1-63 characters of [A-Za-z0-9._-]");
  if (type == StorageType::kLocal) return;
  if (!credential_id) throw validation_error("credential_id", "required for non-local storage");
  auto credential = credentials_.find(*credential_id);
  if (!credential) throw validation_error("credential_id", "no such credential in the vault");
  if (credential->storage_type != type) {
    throw validation_error("credential_id", "credential is for " + std::string(to_string(credential->storage_type)));
  }
}

StorageTarget TargetRegistry::register_target(const governance::Principal& actor, StorageType type,
                                              std::string bucket, std::optional<std::string> credential_id,
                                              std::optional<std::string> endpoint) {
  if (!actor.is_data_manager()) fail(ErrorCode::kForbidden, "only a data manager may register storage");
  validate(type, bucket, credential_id);
  StorageTarget target{type, std::move(bucket), std::move(credential_id), std::move(endpoint), clock_.now()};
  if (!store_.insert(ks::kTargets, target_key(type, target.bucket), to_document(target))) {
    fail(ErrorCode::kConflict, "storage target already registered");
  }
  return target;
}

StorageTarget TargetRegistry::ensure_target(StorageType type, std::string bucket,
                                            std::optional<std::string> credential_id,
                                            std::optional<std::string> endpoint) {
  if (auto existing = find(type, bucket)) return *existing;
  validate(type, bucket, credential_id);
  StorageTarget target{type, std::move(bucket), std::move(credential_id), std::move(endpoint), clock_.now()};
  if (!store_.insert(ks::kTargets, target_key(type, target.bucket), to_document(target))) {
    return *find(type, target.bucket);
  }
  return target;
}

std::vector<StorageTarget> TargetRegistry::list() const {
  std::vector<StorageTarget> out;
  for (const auto& doc : store_.scan(ks::kTargets)) out.push_back(from_document(doc.doc));
  return out;
}

std::optional<StorageTarget> TargetRegistry::find(StorageType type, std::string_view bucket) const {
  auto doc = store_.get(ks::kTargets, target_key(type, bucket));
  if (!doc) return std::nullopt;
  return from_document(doc->doc);
}

std::shared_ptr<ObjectStore> TargetRegistry::make_default_adapter(const StorageTarget& target) const {
  if (target.storage_type == StorageType::kLocal) {
    auto override_it = options_.local_root_overrides.find(target.bucket);
    auto root = override_it != options_.local_root_overrides.end() ? override_it->second
                                                                    : options_.local_root / target.bucket;
    return std::make_shared<LocalObjectStore>(std::move(root), options_.public_base_url);
  }
  auto secret = credentials_.open(target.credential_id.value_or(""));
  const auto bytes = secret.bytes();
  return std::make_shared<UnconfiguredRemoteStore>(target.storage_type, target.bucket,
                                                   Bytes(bytes.begin(), bytes.end()));
}

std::shared_ptr<ObjectStore> TargetRegistry::adapter(StorageType type, std::string_view bucket) {
  const auto key = target_key(type, bucket);
  std::lock_guard lock(adapters_mutex_);
  if (auto it = adapters_.find(key); it != adapters_.end()) return it->second;
  auto target = find(type, bucket);
  if (!target) fail(ErrorCode::kNotFound, "storage target not registered");
  auto adapter = factory_ ? factory_(*target) : make_default_adapter(*target);
  adapters_.emplace(key, adapter);
  return adapter;
}

}  // namespace lake::storage
