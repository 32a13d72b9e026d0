#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/common/encoding.hpp"
#include "lake/common/types.hpp"
#include "lake/governance/users.hpp"
#include "lake/governance/vault.hpp"
#include "lake/store/document_store.hpp"

namespace lake::governance {

struct StorageCredential {
  std::string credential_id;
  StorageType storage_type = StorageType::kS3Compatible;
  std::string label;
  std::string ciphertext;
  std::string registered_by;
  Timestamp created_at;
};

/// Metadata only; the ciphertext never leaves the service.
nlohmann::json to_public_json(const StorageCredential& credential);

/// Decrypted key material. Wiped on destruction, never copyable.
class SecretBytes {
 public:
  explicit SecretBytes(Bytes bytes) : bytes_(std::move(bytes)) {}
  ~SecretBytes() { secure_wipe(bytes_); }
  SecretBytes(SecretBytes&& other) noexcept : bytes_(std::move(other.bytes_)) { other.bytes_.clear(); }
  SecretBytes(const SecretBytes&) = delete;
  SecretBytes& operator=(const SecretBytes&) = delete;
  SecretBytes& operator=(SecretBytes&&) = delete;

  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  Bytes bytes_;
};

class CredentialService {
 public:
  CredentialService(store::DocumentStore& store, const Clock& clock, const Vault& vault)
      : store_(store), clock_(clock), vault_(vault) {}

  /// Data-manager only. `secret` is wiped before returning.
  StorageCredential add(const Principal& actor, StorageType type, std::string label, std::string secret);
  std::optional<StorageCredential> find(std::string_view credential_id) const;
  SecretBytes open(std::string_view credential_id) const;

 private:
  store::DocumentStore& store_;
  const Clock& clock_;
  const Vault& vault_;
};

}  // namespace lake::governance
