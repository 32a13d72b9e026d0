#include "lake/gateway/validate.hpp"

#include <charconv>

namespace lake::gateway {

using nlohmann::json;

namespace {

constexpr std::string_view kStorageTypes = "local, s3-compatible, gcs-compatible, hdfs-compatible";
constexpr std::string_view kCategories = "structured, unstructured";
constexpr std::string_view kRoles = "consumer, publisher, data-manager";

const json& empty_object() {
  static const json empty = json::object();
  return empty;
}

}  // namespace

FieldReader::FieldReader(const json& body) : body_(body.is_object() ? body : empty_object()) {
  if (!body.is_object()) issue("body", "must be a JSON object");
}

const json* FieldReader::find(const std::string& field) {
  seen_.insert(field);
  auto it = body_.find(field);
  if (it == body_.end() || it->is_null()) return nullptr;
  return &*it;
}

void FieldReader::issue(std::string field, std::string message) {
  issues_.push_back({std::move(field), std::move(message)});
}

std::string FieldReader::required_string(const std::string& field, std::size_t max_length) {
  const auto* v = find(field);
  if (!v) {
    issue(field, "required");
    return {};
  }
  if (!v->is_string()) {
    issue(field, "must be a string");
    return {};
  }
  auto s = v->get<std::string>();
  if (s.empty()) {
    issue(field, "must not be empty");
  } else if (s.size() > max_length) {
    issue(field, "longer than " + std::to_string(max_length) + " characters");
    return {};
  }
  return s;
}

std::optional<std::string> FieldReader::optional_string(const std::string& field, std::size_t max_length) {
  if (!find(field)) return std::nullopt;
  auto s = required_string(field, max_length);
  if (s.empty()) return std::nullopt;
  return s;
}

std::optional<std::uint64_t> FieldReader::optional_unsigned(const std::string& field) {
  const auto* v = find(field);
  if (!v) return std::nullopt;
  if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0)) {
    issue(field, "must be a non-negative integer");
    return std::nullopt;
  }
  return v->get<std::uint64_t>();
}

std::optional<std::uint64_t> FieldReader::optional_positive(const std::string& field, std::uint64_t max) {
  const auto* v = find(field);
  if (!v) return std::nullopt;
  if (!v->is_number_integer() || v->get<long long>() < 1 || v->get<std::uint64_t>() > max) {
    issue(field, "must be an integer between 1 and " + std::to_string(max));
    return std::nullopt;
  }
  return v->get<std::uint64_t>();
}

std::vector<std::string> FieldReader::string_list(const std::string& field) {
  std::vector<std::string> out;
  const auto* v = find(field);
  if (!v) return out;
  if (!v->is_array()) {
    issue(field, "must be an array of strings");
    return out;
  }
  for (const auto& item : *v) {
    if (!item.is_string() || item.get<std::string>().size() > kMaxStringLength) {
      issue(field, "must be an array of strings");
      return {};
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

void FieldReader::finish() {
  for (const auto& [key, value] : body_.items()) {
    if (!seen_.contains(key)) issue(key, "unknown field");
  }
  if (issues_.empty()) return;
  std::string message = "request validation failed:";
  for (const auto& i : issues_) message += " " + i.field + " (" + i.issue + ")";
  throw Error(ErrorCode::kValidation, message, issues_);
}

json parse_body(std::string_view text) {
  if (text.size() > kMaxMetadataBody) throw validation_error("body", "larger than 10 MiB");
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw validation_error("body", "malformed JSON");
  }
}

catalogue::Page parse_page(const std::function<std::optional<std::string>(const std::string&)>& query_param) {
  catalogue::Page page;
  std::vector<FieldIssue> issues;
  auto read = [&](const std::string& name, std::size_t& target, std::size_t min, std::size_t max) {
    auto raw = query_param(name);
    if (!raw) return;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
    if (ec != std::errc{} || ptr != raw->data() + raw->size() || v < min || v > max) {
      issues.push_back({name, "must be an integer between " + std::to_string(min) + " and " + std::to_string(max)});
      return;
    }
    target = v;
  };
  read("offset", page.offset, 0, 1'000'000'000);
  read("limit", page.limit, 1, catalogue::Page::kMaxLimit);
  if (!issues.empty()) throw Error(ErrorCode::kValidation, "invalid pagination", issues);
  return page;
}

LoginPayload parse_login(const json& body) {
  FieldReader r(body);
  LoginPayload p{r.required_string("login", 320), r.required_string("password")};
  r.finish();
  return p;
}

CreateUserPayload parse_create_user(const json& body) {
  FieldReader r(body);
  CreateUserPayload p;
  p.email = r.required_string("email", 320);
  p.login = r.required_string("login", 64);
  p.password = r.required_string("password");
  p.role = r.optional_enum<Role>("role", parse_role, kRoles).value_or(Role::kConsumer);
  r.finish();
  return p;
}

UpdateUserPayload parse_update_user(const json& body) {
  FieldReader r(body);
  UpdateUserPayload p;
  p.email = r.optional_string("email", 320);
  p.login = r.optional_string("login", 64);
  p.password = r.optional_string("password");
  p.role = r.optional_enum<Role>("role", parse_role, kRoles);
  if (r.ok() && !p.email && !p.login && !p.password && !p.role) r.issue("body", "no fields to update");
  r.finish();
  return p;
}

PasswordResetPayload parse_password_reset(const json& body) {
  FieldReader r(body);
  PasswordResetPayload p;
  p.reset_token = r.optional_string("reset_token", 128);
  p.new_password = r.optional_string("new_password");
  if (p.reset_token && !p.new_password) r.issue("new_password", "required with reset_token");
  if (p.new_password && !p.reset_token) r.issue("reset_token", "required with new_password");
  r.finish();
  return p;
}

CreateCollectionPayload parse_create_collection(const json& body) {
  FieldReader r(body);
  CreateCollectionPayload p;
  p.name = r.required_string("collection_name", 128);
  p.storage_type = r.required_enum<StorageType>("storage_type", parse_storage_type, kStorageTypes)
                       .value_or(StorageType::kLocal);
  p.bucket = r.required_string("bucket", 63);
  if (!p.name.empty() && !catalogue::is_valid_collection_name(p.name)) {
    r.issue("collection_name", "must not contain '/', '\\' or control characters");
  }
  r.finish();
  return p;
}

UploadRequestPayload parse_upload_request(const json& body) {
  FieldReader r(body);
  UploadRequestPayload p;
  p.collection_id = r.required_string("collection_id", 64);
  p.file_name = r.required_string("file_name", 255);
  p.file_category = r.required_enum<FileCategory>("file_category", parse_file_category, kCategories)
                        .value_or(FileCategory::kUnstructured);
  p.bucket = r.optional_string("bucket", 63);
  p.version = r.optional_positive("version", catalogue::kMaxVersion);
  if (!p.file_name.empty() && !catalogue::is_valid_file_name(p.file_name)) {
    r.issue("file_name", "must be a plain file name without path separators");
  }
  r.finish();
  return p;
}

CommitPayload parse_commit(const json& body) {
  FieldReader r(body);
  CommitPayload p;
  p.size_bytes = r.optional_unsigned("size_bytes");
  p.checksum = r.optional_string("checksum", 256);
  r.finish();
  return p;
}

AdvancedSearchPayload parse_advanced_search(const json& body) {
  FieldReader r(body);
  AdvancedSearchPayload p;
  const auto filters = r.string_list("filters");
  const auto offset = r.optional_unsigned("offset");
  const auto limit = r.optional_positive("limit", catalogue::Page::kMaxLimit);
  if (offset) p.page.offset = *offset;
  if (limit) p.page.limit = *limit;
  try {
    p.query = catalogue::FileQuery::parse(filters);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kValidation) throw;
    for (const auto& d : e.details()) r.issue(d.field, d.issue);
    if (e.details().empty()) r.issue("filters", e.what());
  }
  r.finish();
  return p;
}

RegisterBucketPayload parse_register_bucket(const json& body) {
  FieldReader r(body);
  RegisterBucketPayload p;
  p.storage_type = r.required_enum<StorageType>("storage_type", parse_storage_type, kStorageTypes)
                       .value_or(StorageType::kLocal);
  p.bucket = r.required_string("bucket", 63);
  p.credential_id = r.optional_string("credential_id", 64);
  p.endpoint = r.optional_string("endpoint", 512);
  r.finish();
  return p;
}

CredentialPayload parse_credential(const json& body) {
  FieldReader r(body);
  CredentialPayload p;
  p.storage_type = r.required_enum<StorageType>("storage_type", parse_storage_type, kStorageTypes)
                       .value_or(StorageType::kS3Compatible);
  p.label = r.required_string("label", 128);
  p.secret = r.required_string("secret", 8192);
  r.finish();
  return p;
}

AccessRequestPayload parse_access_request(const json& body) {
  FieldReader r(body);
  AccessRequestPayload p;
  p.collection_id = r.required_string("collection_id", 64);
  p.message = r.optional_string("message", 2000);
  r.finish();
  return p;
}

DecisionPayload parse_decision(const json& body) {
  FieldReader r(body);
  DecisionPayload p;
  const auto decision = r.required_string("decision", 16);
  if (decision == "granted") {
    p.grant = true;
  } else if (!decision.empty() && decision != "denied") {
    r.issue("decision", "must be one of granted, denied");
  }
  r.finish();
  return p;
}

GrantPayload parse_grant(const json& body) {
  FieldReader r(body);
  GrantPayload p{r.required_string("user_id", 64)};
  r.finish();
  return p;
}

}  // namespace lake::gateway
