#include "lake/storage/object_store.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>

#include "lake/common/error.hpp"

namespace lake::storage {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTempPrefix = ".upload-";

[[noreturn]] void transport(const std::string& what, const std::error_code& ec) {
  fail(ErrorCode::kTransport, "local storage: " + what + ": " + ec.message());
}

}  // namespace

bool is_safe_object_path(std::string_view path) {
  if (path.empty() || path.size() > 1024 || path.front() == '/') return false;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto end = std::min(path.find('/', start), path.size());
    const auto segment = path.substr(start, end - start);
    if (segment.empty() || segment == "." || segment == "..") return false;
    if (segment.substr(0, kTempPrefix.size()) == kTempPrefix) return false;
    start = end + 1;
  }
  return std::none_of(path.begin(), path.end(), [](unsigned char c) { return c < 0x20 || c == 0x7f || c == '\\'; });
}

LocalObjectStore::LocalObjectStore(fs::path root, std::string public_base_url)
    : root_(std::move(root)), public_base_url_(std::move(public_base_url)) {
  while (!public_base_url_.empty() && public_base_url_.back() == '/') public_base_url_.pop_back();
  std::error_code ec;
  fs::create_directories(root_, ec);
}

fs::path LocalObjectStore::resolve(std::string_view path) const {
  if (!is_safe_object_path(path)) throw validation_error("path", "unsafe object path");
  return root_ / fs::path(std::string(path));
}

bool LocalObjectStore::exists(std::string_view path) { return size(path).has_value(); }

std::optional<std::uint64_t> LocalObjectStore::size(std::string_view path) {
  const auto target = resolve(path);
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) transport("bucket root unavailable", ec ? ec : std::make_error_code(std::errc::no_such_file_or_directory));
  const auto status = fs::status(target, ec);
  if (ec && ec != std::errc::no_such_file_or_directory && ec != std::errc::not_a_directory) {
    transport("stat failed", ec);
  }
  if (!fs::is_regular_file(status)) return std::nullopt;
  const auto bytes = fs::file_size(target, ec);
  if (ec) return std::nullopt;
  return static_cast<std::uint64_t>(bytes);
}

void LocalObjectStore::remove(std::string_view path) {
  const auto target = resolve(path);
  std::error_code ec;
  fs::remove(target, ec);
  if (ec && ec != std::errc::no_such_file_or_directory) transport("delete failed", ec);
}

void LocalObjectStore::write(std::string_view path, std::span<const std::uint8_t> bytes) {
  const auto target = resolve(path);
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) transport("cannot create directory", ec);
  const auto temp = target.parent_path() / (std::string(kTempPrefix) + new_id());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      fs::remove(temp, ec);
      fail(ErrorCode::kTransport, "local storage: write failed");
    }
  }
  fs::rename(temp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    transport("publish failed", ec);
  }
}

Bytes LocalObjectStore::read(std::string_view path) {
  const auto target = resolve(path);
  std::ifstream in(target, std::ios::binary);
  if (!in) fail(ErrorCode::kNotFound, "object not found");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> LocalObjectStore::list(std::string_view prefix) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) transport("bucket root unavailable", ec ? ec : std::make_error_code(std::errc::no_such_file_or_directory));
  for (auto it = fs::recursive_directory_iterator(root_, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    if (it->path().filename().string().rfind(kTempPrefix, 0) == 0) continue;
    auto rel = fs::relative(it->path(), root_).generic_string();
    if (rel.compare(0, prefix.size(), prefix) == 0) out.push_back(std::move(rel));
  }
  if (ec) transport("listing failed", ec);
  std::sort(out.begin(), out.end());
  return out;
}

std::string LocalObjectStore::upload_url(std::string_view ticket_id, std::string_view) {
  return public_base_url_ + "/raw/" + std::string(ticket_id);
}

std::string LocalObjectStore::download_url(std::string_view grant_id, std::string_view) {
  return public_base_url_ + "/raw/" + std::string(grant_id);
}

UnconfiguredRemoteStore::UnconfiguredRemoteStore(StorageType type, std::string bucket, Bytes access_key)
    : type_(type), bucket_(std::move(bucket)), access_key_(std::move(access_key)) {}

UnconfiguredRemoteStore::~UnconfiguredRemoteStore() { secure_wipe(access_key_); }

void UnconfiguredRemoteStore::unavailable() const {
  fail(ErrorCode::kTransport,
       std::string(to_string(type_)) + " bucket '" + bucket_ + "': adapter not configured");
}

bool UnconfiguredRemoteStore::exists(std::string_view) { unavailable(); }
std::optional<std::uint64_t> UnconfiguredRemoteStore::size(std::string_view) { unavailable(); }
void UnconfiguredRemoteStore::remove(std::string_view) { unavailable(); }
void UnconfiguredRemoteStore::write(std::string_view, std::span<const std::uint8_t>) { unavailable(); }
Bytes UnconfiguredRemoteStore::read(std::string_view) { unavailable(); }
std::vector<std::string> UnconfiguredRemoteStore::list(std::string_view) { unavailable(); }
std::string UnconfiguredRemoteStore::upload_url(std::string_view, std::string_view) { unavailable(); }
std::string UnconfiguredRemoteStore::download_url(std::string_view, std::string_view) { unavailable(); }

}  // namespace lake::storage
