#include "lake/cli/profile.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::cli {

using nlohmann::json;
namespace fs = std::filesystem;

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

fs::path ProfileStore::default_path(const EnvLookup& env) {
  if (auto dir = env("LAKE_CONFIG_DIR")) return fs::path(*dir) / "profiles.json";
  if (auto xdg = env("XDG_CONFIG_HOME")) return fs::path(*xdg) / "lake" / "profiles.json";
  if (auto home = env("HOME")) return fs::path(*home) / ".config" / "lake" / "profiles.json";
  return fs::path(".lake") / "profiles.json";
}

namespace {

json read_all(const fs::path& file) {
  std::ifstream in(file);
  if (!in) return json::object();
  try {
    auto doc = json::parse(in);
    return doc.is_object() ? doc : json::object();
  } catch (const json::parse_error&) {
    fail(ErrorCode::kValidation, "profiles file is not valid JSON: " + file.string());
  }
}

}  // namespace

Profile ProfileStore::load(const std::string& name) const {
  Profile p;
  p.name = name;
  const auto doc = read_all(file_);
  const auto profiles = doc.value("profiles", json::object());
  if (!profiles.contains(name)) return p;
  const auto& entry = profiles[name];
  p.base_url = entry.value("base_url", p.base_url);
  if (entry.contains("token") && entry["token"].is_string()) p.token = entry["token"].get<std::string>();
  p.output = entry.value("output", p.output);
  return p;
}

void ProfileStore::save(const Profile& profile) const {
  auto doc = read_all(file_);
  json entry{{"base_url", profile.base_url}, {"output", profile.output}};
  entry["token"] = profile.token ? json(*profile.token) : json(nullptr);
  doc["profiles"][profile.name] = entry;

  if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
  const auto tmp = file_.string() + ".tmp-" + new_id().substr(0, 8);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) fail(ErrorCode::kInternal, "cannot write profiles file " + tmp);
  const auto text = doc.dump(2) + "\n";
  const bool ok = ::fchmod(fd, 0600) == 0 && ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size());
  ::close(fd);
  if (!ok) {
    fs::remove(tmp);
    fail(ErrorCode::kInternal, "cannot write profiles file " + tmp);
  }
  fs::rename(tmp, file_);
}

}  // namespace lake::cli
