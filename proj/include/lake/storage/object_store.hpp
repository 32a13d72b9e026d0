#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lake/common/encoding.hpp"
#include "lake/common/types.hpp"

namespace lake::storage {

/// True for relative, '/'-separated paths without empty, "." or ".."
/// segments, backslashes, or control characters.
bool is_safe_object_path(std::string_view path);

/// Adapter contract every storage backend implements.
///
/// Failures to reach the backend raise ErrorCode::kTransport, which callers
/// must keep distinct from "absent".
class ObjectStore {
 public:
  virtual ~ObjectStore() = default;

  virtual bool exists(std::string_view path) = 0;
  /// Byte size, or nullopt when absent.
  virtual std::optional<std::uint64_t> size(std::string_view path) = 0;
  /// Idempotent: deleting an absent object succeeds.
  virtual void remove(std::string_view path) = 0;
  /// Publishes atomically; a partially written object is never visible.
  virtual void write(std::string_view path, std::span<const std::uint8_t> bytes) = 0;
  virtual Bytes read(std::string_view path) = 0;
  /// Object paths under `prefix`, sorted.
  virtual std::vector<std::string> list(std::string_view prefix = {}) = 0;

  /// Direct transfer endpoints. For the local backend these point at the
  /// gateway's raw endpoints; remote backends would return presigned URLs.
  virtual std::string upload_url(std::string_view ticket_id, std::string_view path) = 0;
  virtual std::string download_url(std::string_view grant_id, std::string_view path) = 0;
};

/// One directory per bucket; object path = storage path under it.
class LocalObjectStore final : public ObjectStore {
 public:
  LocalObjectStore(std::filesystem::path root, std::string public_base_url);

  bool exists(std::string_view path) override;
  std::optional<std::uint64_t> size(std::string_view path) override;
  void remove(std::string_view path) override;
  void write(std::string_view path, std::span<const std::uint8_t> bytes) override;
  Bytes read(std::string_view path) override;
  std::vector<std::string> list(std::string_view prefix = {}) override;
  std::string upload_url(std::string_view ticket_id, std::string_view path) override;
  std::string download_url(std::string_view grant_id, std::string_view path) override;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path resolve(std::string_view path) const;

  std::filesystem::path root_;
  std::string public_base_url_;
};

/// Placeholder for s3/gcs/hdfs-compatible targets: holds the decrypted
/// access key for the lifetime of the adapter and fails every call with
/// "adapter not configured".
class UnconfiguredRemoteStore final : public ObjectStore {
 public:
  UnconfiguredRemoteStore(StorageType type, std::string bucket, Bytes access_key);
  ~UnconfiguredRemoteStore() override;

  bool exists(std::string_view path) override;
  std::optional<std::uint64_t> size(std::string_view path) override;
  void remove(std::string_view path) override;
  void write(std::string_view path, std::span<const std::uint8_t> bytes) override;
  Bytes read(std::string_view path) override;
  std::vector<std::string> list(std::string_view prefix = {}) override;
  std::string upload_url(std::string_view ticket_id, std::string_view path) override;
  std::string download_url(std::string_view grant_id, std::string_view path) override;

 private:
  [[noreturn]] void unavailable() const;

  StorageType type_;
  std::string bucket_;
  Bytes access_key_;
};

}  // namespace lake::storage
