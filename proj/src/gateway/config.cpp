#include "lake/gateway/config.hpp"

#include <fstream>

#include "lake/common/error.hpp"

namespace lake::gateway {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& issue) {
  throw Error(ErrorCode::kValidation, "config: " + field + ": " + issue, {{field, issue}});
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
T read(const json& doc, const char* field, T fallback) {
  if (!doc.contains(field)) return fallback;
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception&) {
    config_error(field, "wrong type");
  }
}

std::chrono::seconds seconds(const json& doc, const char* field, std::chrono::seconds fallback, bool allow_zero) {
  const auto v = read<long long>(doc, field, fallback.count());
  if (v < 0 || (!allow_zero && v == 0)) config_error(field, "must be positive");
  return std::chrono::seconds(v);
}

}  // namespace

Config Config::from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) config_error("config", "must be a JSON object");
  Config c;
  c.host = read<std::string>(doc, "host", c.host);
  c.port = read<int>(doc, "port", c.port);
  if (c.port < 0 || c.port > 65535) config_error("port", "out of range");
  c.public_base_url = read<std::string>(doc, "public_base_url", "");
  while (!c.public_base_url.empty() && c.public_base_url.back() == '/') c.public_base_url.pop_back();

  if (doc.contains("store")) {
    const auto& s = doc["store"];
    if (!s.is_object()) config_error("store", "must be an object");
    const auto kind = read<std::string>(s, "kind", "sqlite");
    if (kind == "sqlite") {
      c.store_kind = StoreKind::kSqlite;
    } else if (kind == "memory") {
      c.store_kind = StoreKind::kMemory;
    } else {
      config_error("store.kind", "must be sqlite or memory");
    }
    c.store_path = resolve(base_dir, read<std::string>(s, "path", c.store_path.string()));
  } else {
    c.store_path = resolve(base_dir, c.store_path.string());
  }
  c.local_storage_root = resolve(base_dir, read<std::string>(doc, "local_storage_root", c.local_storage_root.string()));

  c.ticket_ttl = seconds(doc, "ticket_ttl_seconds", c.ticket_ttl, false);
  c.download_ttl = seconds(doc, "download_ttl_seconds", c.download_ttl, false);
  c.token_ttl = seconds(doc, "token_ttl_seconds", c.token_ttl, false);
  c.janitor_interval = seconds(doc, "janitor_interval_seconds", c.janitor_interval, true);
  c.purge_grace_factor = read<double>(doc, "purge_grace_factor", c.purge_grace_factor);
  if (c.purge_grace_factor < 1.0) config_error("purge_grace_factor", "must be at least 1");
  c.open_registration = read<bool>(doc, "open_registration", c.open_registration);

  if (doc.contains("password_hash")) {
    const auto& h = doc["password_hash"];
    c.password_hash.log_n = read<unsigned>(h, "log_n", c.password_hash.log_n);
    c.password_hash.r = read<unsigned>(h, "r", c.password_hash.r);
    c.password_hash.p = read<unsigned>(h, "p", c.password_hash.p);
    if (c.password_hash.log_n < 1 || c.password_hash.log_n > 22) config_error("password_hash.log_n", "out of range");
  }

  if (doc.contains("targets")) {
    if (!doc["targets"].is_array()) config_error("targets", "must be an array");
    for (const auto& t : doc["targets"]) {
      TargetConfig tc;
      const auto type = parse_storage_type(read<std::string>(t, "storage_type", "local"));
      if (!type) config_error("targets.storage_type", "unknown storage type");
      tc.storage_type = *type;
      tc.bucket = read<std::string>(t, "bucket", "");
      if (tc.bucket.empty()) config_error("targets.bucket", "required");
      if (t.contains("root_dir")) tc.root_dir = resolve(base_dir, t["root_dir"].get<std::string>());
      if (t.contains("credential_id")) tc.credential_id = t["credential_id"].get<std::string>();
      if (t.contains("endpoint")) tc.endpoint = t["endpoint"].get<std::string>();
      c.targets.push_back(std::move(tc));
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kNotFound, "config file not found: " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config", std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc, file.parent_path());
}

}  // namespace lake::gateway
