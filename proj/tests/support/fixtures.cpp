#include "fixtures.hpp"

#include <httplib.h>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"
#include "lake/governance/vault.hpp"

namespace lake::testing {

namespace fs = std::filesystem;
using nlohmann::json;

TempDir::TempDir() : path_(fs::temp_directory_path() / ("lake-test-" + new_id())) { fs::create_directories(path_); }

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Deployment::Deployment(DeploymentOptions options)
    : clock_(std::make_shared<ManualClock>()), secret_key_(governance::Vault::generate_key()) {
  gateway::Config c;
  c.host = "127.0.0.1";
  c.port = 0;
  c.store_kind = options.store;
  c.store_path = dir_.path() / "catalogue.db";
  c.local_storage_root = dir_.path() / "objects";
  c.ticket_ttl = options.ticket_ttl;
  c.download_ttl = options.download_ttl;
  c.janitor_interval = std::chrono::seconds(0);
  c.open_registration = options.open_registration;
  c.password_hash = {.log_n = 6, .r = 8, .p = 1};
  for (const auto& b : options.local_buckets) c.targets.push_back({StorageType::kLocal, b, {}, {}, {}});
  lake_ = std::make_unique<gateway::Lakehouse>(
      c, gateway::DeploymentOptions{.secret_key = secret_key_, .dev_insecure = false, .clock = clock_});
}

governance::Principal Deployment::add_user(const std::string& login, Role role) {
  if (!dm_ && role != Role::kDataManager) data_manager();
  std::optional<governance::Principal> actor = dm_;
  const auto user = lake_->users.create(actor, {login + "@example.org", login, kPassword, role});
  governance::Principal p{user.id, user.role};
  if (!dm_ && role == Role::kDataManager) dm_ = p;
  return p;
}

governance::Principal& Deployment::data_manager() {
  if (!dm_) add_user("steward", Role::kDataManager);
  return *dm_;
}

std::string Deployment::token_for(const std::string& login) { return lake_->users.login(login, kPassword).token; }

void FlakyStore::check() const {
  if (unreachable) fail(ErrorCode::kTransport, "storage backend unreachable");
}
bool FlakyStore::exists(std::string_view path) {
  check();
  return inner_->exists(path);
}
std::optional<std::uint64_t> FlakyStore::size(std::string_view path) {
  check();
  return inner_->size(path);
}
void FlakyStore::remove(std::string_view path) {
  check();
  inner_->remove(path);
}
void FlakyStore::write(std::string_view path, std::span<const std::uint8_t> bytes) {
  check();
  inner_->write(path, bytes);
}
Bytes FlakyStore::read(std::string_view path) {
  check();
  return inner_->read(path);
}
std::vector<std::string> FlakyStore::list(std::string_view prefix) {
  check();
  return inner_->list(prefix);
}
std::string FlakyStore::upload_url(std::string_view ticket_id, std::string_view path) {
  return inner_->upload_url(ticket_id, path);
}
std::string FlakyStore::download_url(std::string_view grant_id, std::string_view path) {
  return inner_->download_url(grant_id, path);
}

bool MemoryObjectStore::exists(std::string_view path) {
  std::lock_guard lock(mutex_);
  return objects_.contains(path);
}
std::optional<std::uint64_t> MemoryObjectStore::size(std::string_view path) {
  std::lock_guard lock(mutex_);
  auto it = objects_.find(path);
  if (it == objects_.end()) return std::nullopt;
  return it->second.size();
}
void MemoryObjectStore::remove(std::string_view path) {
  std::lock_guard lock(mutex_);
  if (auto it = objects_.find(path); it != objects_.end()) objects_.erase(it);
}
void MemoryObjectStore::write(std::string_view path, std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mutex_);
  objects_[std::string(path)] = Bytes(bytes.begin(), bytes.end());
}
Bytes MemoryObjectStore::read(std::string_view path) {
  std::lock_guard lock(mutex_);
  auto it = objects_.find(path);
  if (it == objects_.end()) fail(ErrorCode::kNotFound, "object not found");
  return it->second;
}
std::vector<std::string> MemoryObjectStore::list(std::string_view prefix) {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [k, v] : objects_) {
    if (k.starts_with(prefix)) out.push_back(k);
  }
  return out;
}
std::string MemoryObjectStore::upload_url(std::string_view ticket_id, std::string_view) {
  return "memory://upload/" + std::string(ticket_id);
}
std::string MemoryObjectStore::download_url(std::string_view grant_id, std::string_view) {
  return "memory://download/" + std::string(grant_id);
}

namespace {

std::pair<std::string, std::string> split(const std::string& url) {
  const auto scheme = url.find("://");
  const auto slash = url.find('/', scheme + 3);
  return {url.substr(0, slash), slash == std::string::npos ? "/" : url.substr(slash)};
}

HttpResult to_result(const httplib::Result& res) {
  HttpResult out;
  if (!res) return out;
  out.status = res->status;
  out.raw = res->body;
  out.body = json::parse(res->body, nullptr, false);
  return out;
}

}  // namespace

HttpResult Http::call(const std::string& method, const std::string& path, const std::optional<json>& body) const {
  return call_raw(method, path, body ? body->dump() : std::string(), "application/json");
}

HttpResult Http::call_raw(const std::string& method, const std::string& path, const std::string& body,
                          const std::string& content_type) const {
  httplib::Client cli(base_);
  httplib::Headers headers;
  if (token_) headers.emplace("Authorization", "Bearer " + *token_);
  if (method == "GET") return to_result(cli.Get(path, headers));
  if (method == "POST") return to_result(cli.Post(path, headers, body, content_type));
  if (method == "PATCH") return to_result(cli.Patch(path, headers, body, content_type));
  if (method == "PUT") return to_result(cli.Put(path, headers, body, content_type));
  if (method == "DELETE") return to_result(cli.Delete(path, headers, body, content_type));
  return {};
}

HttpResult Http::put_url(const std::string& url, const std::string& bytes) const {
  const auto [origin, path] = split(url);
  httplib::Client cli(origin);
  return to_result(cli.Put(path, bytes, "application/octet-stream"));
}

HttpResult Http::get_url(const std::string& url) const {
  const auto [origin, path] = split(url);
  httplib::Client cli(origin);
  return to_result(cli.Get(path));
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      if (cell.find_first_of(",\"\r\n") != std::string::npos) {
        out += '"';
        for (char c : cell) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += cell;
      }
      if (i + 1 < row.size()) out += ',';
    }
    out += "\r\n";
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lake::testing
