#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/catalogue/query.hpp"
#include "lake/catalogue/types.hpp"
#include "lake/common/error.hpp"
#include "lake/common/types.hpp"

namespace lake::gateway {

inline constexpr std::size_t kMaxMetadataBody = 10u * 1024u * 1024u;
inline constexpr std::size_t kMaxStringLength = 1024;

/// Parses a request body, collecting every field issue before failing.
/// Unknown fields are rejected.
class FieldReader {
 public:
  explicit FieldReader(const nlohmann::json& body);

  std::string required_string(const std::string& field, std::size_t max_length = kMaxStringLength);
  std::optional<std::string> optional_string(const std::string& field, std::size_t max_length = kMaxStringLength);
  std::optional<std::uint64_t> optional_positive(const std::string& field, std::uint64_t max);
  std::optional<std::uint64_t> optional_unsigned(const std::string& field);
  std::vector<std::string> string_list(const std::string& field);

  template <typename T>
  std::optional<T> required_enum(const std::string& field, std::optional<T> (*parse)(std::string_view),
                                 std::string_view allowed) {
    auto raw = required_string(field);
    if (raw.empty()) return std::nullopt;
    return parse_enum(field, raw, parse, allowed);
  }
  template <typename T>
  std::optional<T> optional_enum(const std::string& field, std::optional<T> (*parse)(std::string_view),
                                 std::string_view allowed) {
    auto raw = optional_string(field);
    if (!raw) return std::nullopt;
    return parse_enum(field, *raw, parse, allowed);
  }

  void issue(std::string field, std::string message);
  bool ok() const { return issues_.empty(); }
  /// Throws a validation error listing every issue, if any.
  void finish();

 private:
  template <typename T>
  std::optional<T> parse_enum(const std::string& field, const std::string& raw,
                              std::optional<T> (*parse)(std::string_view), std::string_view allowed) {
    auto v = parse(raw);
    if (!v) issue(field, "must be one of " + std::string(allowed));
    return v;
  }

  const nlohmann::json* find(const std::string& field);

  const nlohmann::json& body_;
  std::set<std::string> seen_;
  std::vector<FieldIssue> issues_;
};

/// Parses raw body text as a JSON object (empty text is an empty object).
nlohmann::json parse_body(std::string_view text);

catalogue::Page parse_page(const std::function<std::optional<std::string>(const std::string&)>& query_param);

struct LoginPayload {
  std::string login;
  std::string password;
};
struct CreateUserPayload {
  std::string email;
  std::string login;
  std::string password;
  Role role = Role::kConsumer;
};
struct UpdateUserPayload {
  std::optional<std::string> email;
  std::optional<std::string> login;
  std::optional<std::string> password;
  std::optional<Role> role;
};
/// Empty: data manager issues a token. Both set: the user consumes it.
struct PasswordResetPayload {
  std::optional<std::string> reset_token;
  std::optional<std::string> new_password;
};
struct CreateCollectionPayload {
  std::string name;
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
};
struct UploadRequestPayload {
  std::string collection_id;
  std::string file_name;
  FileCategory file_category = FileCategory::kUnstructured;
  /// Defaults to the collection's bucket.
  std::optional<std::string> bucket;
  std::optional<std::uint64_t> version;
};
struct CommitPayload {
  std::optional<std::uint64_t> size_bytes;
  std::optional<std::string> checksum;
};
struct AdvancedSearchPayload {
  catalogue::FileQuery query;
  catalogue::Page page;
};
struct RegisterBucketPayload {
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
  std::optional<std::string> credential_id;
  std::optional<std::string> endpoint;
};
struct CredentialPayload {
  StorageType storage_type = StorageType::kS3Compatible;
  std::string label;
  std::string secret;
};
struct AccessRequestPayload {
  std::string collection_id;
  std::optional<std::string> message;
};
struct DecisionPayload {
  bool grant = false;
};
struct GrantPayload {
  std::string user_id;
};

LoginPayload parse_login(const nlohmann::json& body);
CreateUserPayload parse_create_user(const nlohmann::json& body);
UpdateUserPayload parse_update_user(const nlohmann::json& body);
PasswordResetPayload parse_password_reset(const nlohmann::json& body);
CreateCollectionPayload parse_create_collection(const nlohmann::json& body);
UploadRequestPayload parse_upload_request(const nlohmann::json& body);
CommitPayload parse_commit(const nlohmann::json& body);
AdvancedSearchPayload parse_advanced_search(const nlohmann::json& body);
RegisterBucketPayload parse_register_bucket(const nlohmann::json& body);
CredentialPayload parse_credential(const nlohmann::json& body);
AccessRequestPayload parse_access_request(const nlohmann::json& body);
DecisionPayload parse_decision(const nlohmann::json& body);
GrantPayload parse_grant(const nlohmann::json& body);

}  // namespace lake::gateway
