#include "lake/governance/credentials.hpp"

#include "lake/common/error.hpp"

namespace lake::governance {

namespace ks = store::keyspace;
using nlohmann::json;

json to_public_json(const StorageCredential& c) {
  return {{"credential_id", c.credential_id},
          {"storage_type", to_string(c.storage_type)},
          {"label", c.label},
          {"registered_by", c.registered_by},
          {"created_at", format_timestamp(c.created_at)}};
}

StorageCredential CredentialService::add(const Principal& actor, StorageType type, std::string label,
                                         std::string secret) {
  if (!actor.is_data_manager()) {
    secure_wipe(secret);
    fail(ErrorCode::kForbidden, "only a data manager may register credentials");
  }
  if (secret.empty()) throw validation_error("secret", "must not be empty");
  StorageCredential credential{new_id(), type, std::move(label), vault_.seal(secret), actor.user_id,
                               clock_.now()};
  secure_wipe(secret);
  json doc = to_public_json(credential);
  doc["ciphertext"] = credential.ciphertext;
  if (!store_.insert(ks::kCredentials, credential.credential_id, std::move(doc))) {
    fail(ErrorCode::kConflict, "credential id collision");
  }
  return credential;
}

std::optional<StorageCredential> CredentialService::find(std::string_view credential_id) const {
  auto doc = store_.get(ks::kCredentials, credential_id);
  if (!doc) return std::nullopt;
  const auto& d = doc->doc;
  return StorageCredential{d.at("credential_id").get<std::string>(),
                           parse_storage_type(d.at("storage_type").get<std::string>()).value_or(StorageType::kLocal),
                           d.at("label").get<std::string>(),
                           d.at("ciphertext").get<std::string>(),
                           d.at("registered_by").get<std::string>(),
                           parse_timestamp(d.at("created_at").get<std::string>()).value_or(Timestamp{})};
}

SecretBytes CredentialService::open(std::string_view credential_id) const {
  auto credential = find(credential_id);
  if (!credential) fail(ErrorCode::kNotFound, "credential not found");
  return SecretBytes(vault_.open(credential->ciphertext));
}

}  // namespace lake::governance
