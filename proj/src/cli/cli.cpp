#include "lake/cli/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lake/common/encoding.hpp"
#include "lake/gateway/config.hpp"
#include "lake/gateway/lakehouse.hpp"
#include "lake/gateway/server.hpp"
#include "lake/janitor/janitor.hpp"

namespace lake::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return 64;
    case ErrorCode::kPreconditionFailed: return 65;
    case ErrorCode::kNotFound: return 66;
    case ErrorCode::kTransport: return 69;
    case ErrorCode::kInternal: return 70;
    case ErrorCode::kConflict: return 73;
    case ErrorCode::kForbidden: return 76;
    case ErrorCode::kAuthentication: return 77;
  }
  return 70;
}

const std::vector<CommandRoute>& command_routes() {
  static const std::vector<CommandRoute> routes{
      {"POST", "/auth/login", "auth login"},
      {"POST", "/users", "users create"},
      {"PATCH", "/users/{id}", "users update"},
      {"DELETE", "/users/{id}", "users delete"},
      {"POST", "/users/{id}/password-reset", "users reset-password"},
      {"GET", "/collections", "collections list"},
      {"POST", "/collections", "collections create"},
      {"GET", "/collections/{id}", "collections show"},
      {"GET", "/collections/{id}/files", "files list"},
      {"GET", "/files/search", "files search"},
      {"POST", "/files/search", "files search"},
      {"POST", "/files/upload-request", "files upload"},
      {"POST", "/files/{id}/commit", "files upload"},
      {"GET", "/files/{id}/download-url", "files download"},
      {"GET", "/buckets", "buckets list"},
      {"POST", "/buckets", "buckets register"},
      {"POST", "/credentials", "credentials add"},
      {"POST", "/access-requests", "access request"},
      {"GET", "/access-requests", "access list"},
      {"POST", "/access-requests/{id}/decision", "access decide"},
      {"POST", "/visas/{id}/grants", "visas grant"},
      {"DELETE", "/visas/{id}/grants/{user_id}", "visas revoke"},
      {"POST", "/admin/janitor/sweep", "admin janitor sweep"},
      {"PUT", "/raw/{ticket_id}", "files upload"},
      {"GET", "/raw/{grant_id}", "files download"},
  };
  return routes;
}

std::string normalize_local_path(std::string_view path) {
  std::string out(path);
  std::ranges::replace(out, '\\', '/');
  return out;
}

namespace {

// HTTP

struct Url {
  std::string origin;
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw validation_error("base-url", "must start with http://");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string path_escape(std::string_view segment) {
  std::string out;
  for (unsigned char c : segment) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      static constexpr char hex[] = "0123456789ABCDEF";
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

class ApiClient {
 public:
  ApiClient(std::string base_url, std::optional<std::string> token)
      : base_(split_url(std::move(base_url))), token_(std::move(token)) {}

  json get(const std::string& path, const httplib::Params& params = {}) const {
    auto cli = client(base_.origin);
    auto res = cli.Get(base_.path_prefix() + path, params, headers(), httplib::Progress{});
    return unwrap(res, path);
  }

  json send(const std::string& method, const std::string& path, const json& body = json::object()) const {
    auto cli = client(base_.origin);
    const auto full = base_.path_prefix() + path;
    const auto text = body.dump();
    httplib::Result res;
    if (method == "POST") {
      res = cli.Post(full, headers(), text, "application/json");
    } else if (method == "PATCH") {
      res = cli.Patch(full, headers(), text, "application/json");
    } else {
      res = cli.Delete(full, headers(), text, "application/json");
    }
    return unwrap(res, path);
  }

  void put_raw(const std::string& url, const std::string& bytes) const {
    const auto u = split_url(url);
    auto cli = client(u.origin);
    unwrap(cli.Put(u.path, bytes, "application/octet-stream"), u.path);
  }

  std::string get_raw(const std::string& url) const {
    const auto u = split_url(url);
    auto cli = client(u.origin);
    auto res = cli.Get(u.path);
    if (!res) fail(ErrorCode::kTransport, "cannot reach " + u.origin + ": " + httplib::to_string(res.error()));
    if (res->status >= 300) unwrap(res, u.path);
    return res->body;
  }

 private:
  struct Base {
    std::string origin;
    std::string path;
    Base(Url u) : origin(std::move(u.origin)), path(std::move(u.path)) {
      while (!path.empty() && path.back() == '/') path.pop_back();
    }
    const std::string& path_prefix() const { return path; }
  };

  static httplib::Client client(const std::string& origin) {
    httplib::Client cli(origin);
    cli.set_connection_timeout(std::chrono::seconds(10));
    cli.set_read_timeout(std::chrono::seconds(120));
    cli.set_write_timeout(std::chrono::seconds(120));
    return cli;
  }

  httplib::Headers headers() const {
    httplib::Headers h{{"Accept", "application/json"}};
    if (token_) h.emplace("Authorization", "Bearer " + *token_);
    return h;
  }

  json unwrap(const httplib::Result& res, const std::string& path) const {
    if (!res) {
      fail(ErrorCode::kTransport, "cannot reach " + base_.origin + ": " + httplib::to_string(res.error()));
    }
    json body;
    try {
      body = json::parse(res->body);
    } catch (const json::parse_error&) {
      fail(ErrorCode::kTransport, "unexpected response from " + path + " (HTTP " + std::to_string(res->status) + ")");
    }
    if (body.contains("error")) {
      const auto& e = body["error"];
      std::vector<FieldIssue> details;
      for (const auto& d : e.value("details", json::array())) {
        details.push_back({d.value("field", ""), d.value("issue", "")});
      }
      throw Error(error_code_from_string(e.value("code", "internal")), e.value("message", ""), std::move(details));
    }
    if (res->status >= 300 || !body.contains("data")) {
      fail(ErrorCode::kTransport, "unexpected response from " + path + " (HTTP " + std::to_string(res->status) + ")");
    }
    return body["data"];
  }

  Base base_;
  std::optional<std::string> token_;
};

// Output

std::string cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Columns {
  std::vector<std::string> names;
};

const Columns kCollectionColumns{{"id", "name", "storage_type", "bucket", "owner_id"}};
const Columns kFileColumns{{"id", "file_name", "version", "file_category", "status", "size_bytes", "storage_path"}};
const Columns kBucketColumns{{"storage_type", "bucket", "endpoint", "credential_id"}};
const Columns kRequestColumns{{"request_id", "collection_id", "requester_id", "status", "submitted_at"}};

struct Output {
  std::ostream& out;
  bool json_mode = false;
  bool quiet = false;

  void table(const json& data, const Columns& columns) const {
    if (quiet) return;
    if (json_mode) {
      out << data.dump(2) << "\n";
      return;
    }
    const auto& items = data.at("items");
    std::vector<std::size_t> widths;
    for (const auto& c : columns.names) widths.push_back(c.size());
    std::vector<std::vector<std::string>> rows;
    for (const auto& item : items) {
      std::vector<std::string> row;
      for (std::size_t i = 0; i < columns.names.size(); ++i) {
        row.push_back(cell(item.value(columns.names[i], json(nullptr))));
        widths[i] = std::max(widths[i], row.back().size());
      }
      rows.push_back(std::move(row));
    }
    auto line = [&](const std::vector<std::string>& cells) {
      std::string text;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        text += cells[i];
        if (i + 1 < cells.size()) text += std::string(widths[i] - cells[i].size() + 2, ' ');
      }
      out << text << "\n";
    };
    line(columns.names);
    for (const auto& r : rows) line(r);
    const auto total = data.value("total", items.size());
    if (total > items.size()) out << "(" << items.size() << " of " << total << ")\n";
  }

  void object(const json& data) const {
    if (quiet) return;
    if (json_mode) {
      out << data.dump(2) << "\n";
      return;
    }
    std::size_t width = 0;
    for (const auto& [k, v] : data.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : data.items()) {
      out << k << std::string(width - k.size() + 2, ' ') << (v.is_object() || v.is_array() ? v.dump() : cell(v))
          << "\n";
    }
  }

  void message(const std::string& text, const json& data) const {
    if (quiet) return;
    if (json_mode) {
      out << data.dump(2) << "\n";
    } else {
      out << text << "\n";
    }
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("path", "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// admin serve

int serve(const gateway::Config& config, gateway::DeploymentOptions options, std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  gateway::Lakehouse lake(config, std::move(options));
  gateway::Server server(lake);
  server.bind();
  lake.start_periodic_sweeps();
  out << "lake gateway listening on " << server.base_url() << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  lake.stop_periodic_sweeps();
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"lake: data lakehouse command line"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show every subcommand");

  std::string profile_name = "default";
  std::optional<std::string> base_url_flag;
  bool json_flag = false;
  bool quiet = false;
  app.add_option("--profile", profile_name, "Profile name")->envname("LAKE_PROFILE");
  app.add_option("--base-url", base_url_flag, "Gateway base URL");
  app.add_flag("--json", json_flag, "Print JSON (sorted keys)");
  app.add_flag("--quiet,-q", quiet, "Print nothing on success");

  std::function<void()> action;
  std::optional<ProfileStore> profiles;
  Profile profile;

  auto output = [&] { return Output{out, json_flag || profile.output == "json", quiet}; };
  auto api = [&] {
    auto token = env("LAKE_TOKEN");
    if (!token) token = profile.token;
    return ApiClient(base_url_flag.value_or(profile.base_url), token);
  };
  auto page_params = [](std::optional<std::size_t> offset, std::optional<std::size_t> limit) {
    httplib::Params p;
    if (offset) p.emplace("offset", std::to_string(*offset));
    if (limit) p.emplace("limit", std::to_string(*limit));
    return p;
  };

  // auth
  auto* auth = app.add_subcommand("auth", "Authentication")->require_subcommand(1);
  std::string login_name;
  std::optional<std::string> password;
  auto* login = auth->add_subcommand("login", "Log in and cache the token in the profile");
  login->add_option("login", login_name, "Login or email")->required();
  login->add_option("--password", password, "Password (else LAKE_PASSWORD)");
  login->callback([&] {
    action = [&] {
      auto pw = password ? password : env("LAKE_PASSWORD");
      if (!pw) throw validation_error("password", "required (--password or LAKE_PASSWORD)");
      const auto data = ApiClient(base_url_flag.value_or(profile.base_url), std::nullopt)
                            .send("POST", "/auth/login", {{"login", login_name}, {"password", *pw}});
      profile.token = data.at("token").get<std::string>();
      if (base_url_flag) profile.base_url = *base_url_flag;
      profiles->save(profile);
      output().message("logged in as " + data.value("user_id", std::string()), {{"user_id", data["user_id"]},
                                                                              {"expires_at", data["expires_at"]}});
    };
  });

  // users
  auto* users = app.add_subcommand("users", "User management")->require_subcommand(1);
  std::string email, user_login, user_id;
  std::optional<std::string> role, new_email, new_login, new_password, reset_token;
  auto* ucreate = users->add_subcommand("create", "Create a user");
  ucreate->add_option("--email", email)->required();
  ucreate->add_option("--login", user_login)->required();
  ucreate->add_option("--password", password)->required();
  ucreate->add_option("--role", role, "consumer, publisher or data-manager");
  ucreate->callback([&] {
    action = [&] {
      json body{{"email", email}, {"login", user_login}, {"password", *password}};
      if (role) body["role"] = *role;
      output().object(api().send("POST", "/users", body));
    };
  });
  auto* uupdate = users->add_subcommand("update", "Update a user");
  uupdate->add_option("user_id", user_id)->required();
  uupdate->add_option("--email", new_email);
  uupdate->add_option("--login", new_login);
  uupdate->add_option("--password", new_password);
  uupdate->add_option("--role", role);
  uupdate->callback([&] {
    action = [&] {
      json body = json::object();
      if (new_email) body["email"] = *new_email;
      if (new_login) body["login"] = *new_login;
      if (new_password) body["password"] = *new_password;
      if (role) body["role"] = *role;
      output().object(api().send("PATCH", "/users/" + path_escape(user_id), body));
    };
  });
  auto* udelete = users->add_subcommand("delete", "Delete a user");
  udelete->add_option("user_id", user_id)->required();
  udelete->callback([&] {
    action = [&] {
      const auto data = api().send("DELETE", "/users/" + path_escape(user_id));
      output().message("deleted user " + user_id, data);
    };
  });
  auto* ureset = users->add_subcommand("reset-password",
                                       "Issue a reset token (data manager), or consume one with --token");
  ureset->add_option("user_id", user_id)->required();
  ureset->add_option("--token", reset_token, "Reset token to consume");
  ureset->add_option("--new-password", new_password);
  ureset->callback([&] {
    action = [&] {
      json body = json::object();
      if (reset_token) body["reset_token"] = *reset_token;
      if (new_password) body["new_password"] = *new_password;
      output().object(api().send("POST", "/users/" + path_escape(user_id) + "/password-reset", body));
    };
  });

  // collections
  auto* collections = app.add_subcommand("collections", "Collection index")->require_subcommand(1);
  std::optional<std::size_t> offset, limit;
  std::string collection_id, collection_name, storage_type = "local", bucket;
  auto* clist = collections->add_subcommand("list", "List collections");
  clist->add_option("--offset", offset);
  clist->add_option("--limit", limit);
  clist->callback([&] {
    action = [&] { output().table(api().get("/collections", page_params(offset, limit)), kCollectionColumns); };
  });
  auto* ccreate = collections->add_subcommand("create", "Create a collection");
  ccreate->add_option("name", collection_name)->required();
  ccreate->add_option("--storage-type", storage_type);
  ccreate->add_option("--bucket", bucket)->required();
  ccreate->callback([&] {
    action = [&] {
      output().object(api().send(
          "POST", "/collections",
          {{"collection_name", collection_name}, {"storage_type", storage_type}, {"bucket", bucket}}));
    };
  });
  auto* cshow = collections->add_subcommand("show", "Show one collection");
  cshow->add_option("collection_id", collection_id)->required();
  cshow->callback([&] {
    action = [&] { output().object(api().get("/collections/" + path_escape(collection_id))); };
  });

  // files
  auto* files = app.add_subcommand("files", "File index and transfers")->require_subcommand(1);
  std::string file_id, local_path, category;
  std::optional<std::string> keyword, final_name, dest;
  std::optional<std::uint64_t> version;
  std::vector<std::string> where;
  auto* flist = files->add_subcommand("list", "Committed files of a collection");
  flist->add_option("collection_id", collection_id)->required();
  flist->add_option("--offset", offset);
  flist->add_option("--limit", limit);
  flist->callback([&] {
    action = [&] {
      output().table(api().get("/collections/" + path_escape(collection_id) + "/files", page_params(offset, limit)),
                     kFileColumns);
    };
  });
  auto* fsearch = files->add_subcommand("search", "Keyword search, or exact filters with --where");
  fsearch->add_option("keyword", keyword, "Case-insensitive substring of the file name");
  fsearch->add_option("--where", where, "field=value (repeatable)");
  fsearch->add_option("--offset", offset);
  fsearch->add_option("--limit", limit);
  fsearch->callback([&] {
    action = [&] {
      if (keyword && !where.empty()) throw validation_error("keyword", "use either a keyword or --where");
      if (!keyword && where.empty()) throw validation_error("keyword", "a keyword or --where is required");
      if (keyword) {
        auto params = page_params(offset, limit);
        params.emplace("keyword", *keyword);
        output().table(api().get("/files/search", params), kFileColumns);
        return;
      }
      json body{{"filters", where}};
      if (offset) body["offset"] = *offset;
      if (limit) body["limit"] = *limit;
      output().table(api().send("POST", "/files/search", body), kFileColumns);
    };
  });
  auto* fupload = files->add_subcommand("upload", "Request a ticket, transfer the bytes, commit");
  fupload->add_option("path", local_path, "Local file (either separator style)")->required();
  fupload->add_option("--collection", collection_id)->required();
  fupload->add_option("--category", category, "structured or unstructured")->required();
  fupload->add_option("--name", final_name, "Final file name (default: the local base name)");
  fupload->add_option("--version", version, "Explicit version (default: next)");
  std::optional<std::string> upload_bucket;
  fupload->add_option("--bucket", upload_bucket, "Target bucket (default: the collection's)");
  fupload->callback([&] {
    action = [&] {
      const fs::path path(normalize_local_path(local_path));
      const auto bytes = read_file(path);
      const auto client = api();
      json request{{"collection_id", collection_id},
                   {"file_name", final_name.value_or(path.filename().string())},
                   {"file_category", category}};
      if (version) request["version"] = *version;
      if (upload_bucket) request["bucket"] = *upload_bucket;
      const auto issued = client.send("POST", "/files/upload-request", request);
      const auto& ticket = issued.at("ticket");
      client.put_raw(ticket.at("upload_url").get<std::string>(), bytes);
      const auto record = client.send(
          "POST", "/files/" + path_escape(issued.at("file").at("id").get<std::string>()) + "/commit",
          {{"size_bytes", bytes.size()}, {"checksum", "sha256:" + sha256_hex(bytes)}});
      output().object(record);
    };
  });
  auto* fdownload = files->add_subcommand("download", "Fetch a committed file");
  fdownload->add_option("file_id", file_id)->required();
  fdownload->add_option("--output,-o", dest, "Destination path (default: the file name; '-' for stdout)");
  fdownload->callback([&] {
    action = [&] {
      const auto client = api();
      const auto grant = client.get("/files/" + path_escape(file_id) + "/download-url");
      const auto bytes = client.get_raw(grant.at("download_url").get<std::string>());
      if (dest && *dest == "-") {
        out << bytes;
        return;
      }
      const fs::path target = dest ? fs::path(normalize_local_path(*dest))
                                   : fs::path(grant.value("file_name", file_id)).filename();
      std::ofstream f(target, std::ios::binary | std::ios::trunc);
      if (!f) throw validation_error("output", "cannot write " + target.string());
      f << bytes;
      output().message("wrote " + std::to_string(bytes.size()) + " bytes to " + target.string(),
                       {{"path", target.string()}, {"size_bytes", bytes.size()}});
    };
  });

  // buckets
  auto* buckets = app.add_subcommand("buckets", "Storage targets")->require_subcommand(1);
  std::optional<std::string> credential_id, endpoint;
  auto* blist = buckets->add_subcommand("list", "List storage targets");
  blist->callback([&] { action = [&] { output().table(api().get("/buckets"), kBucketColumns); }; });
  auto* bregister = buckets->add_subcommand("register", "Register a storage target");
  bregister->add_option("bucket", bucket)->required();
  bregister->add_option("--storage-type", storage_type);
  bregister->add_option("--credential", credential_id);
  bregister->add_option("--endpoint", endpoint);
  bregister->callback([&] {
    action = [&] {
      json body{{"storage_type", storage_type}, {"bucket", bucket}};
      if (credential_id) body["credential_id"] = *credential_id;
      if (endpoint) body["endpoint"] = *endpoint;
      output().object(api().send("POST", "/buckets", body));
    };
  });

  // credentials
  auto* credentials = app.add_subcommand("credentials", "Storage credentials")->require_subcommand(1);
  std::string label;
  std::optional<std::string> secret;
  auto* cadd = credentials->add_subcommand("add", "Seal a storage access key in the vault");
  cadd->add_option("--storage-type", storage_type)->required();
  cadd->add_option("--label", label)->required();
  cadd->add_option("--secret", secret, "Key material (else LAKE_CREDENTIAL_SECRET)");
  cadd->callback([&] {
    action = [&] {
      auto s = secret ? secret : env("LAKE_CREDENTIAL_SECRET");
      if (!s) throw validation_error("secret", "required (--secret or LAKE_CREDENTIAL_SECRET)");
      output().object(
          api().send("POST", "/credentials", {{"storage_type", storage_type}, {"label", label}, {"secret", *s}}));
      secure_wipe(*s);
    };
  });

  // access
  auto* access = app.add_subcommand("access", "Access requests")->require_subcommand(1);
  std::optional<std::string> message, collection_filter;
  std::string request_id;
  bool grant_flag = false, deny_flag = false;
  auto* arequest = access->add_subcommand("request", "Ask a collection owner for access");
  arequest->add_option("collection_id", collection_id)->required();
  arequest->add_option("--message", message);
  arequest->callback([&] {
    action = [&] {
      json body{{"collection_id", collection_id}};
      if (message) body["message"] = *message;
      output().object(api().send("POST", "/access-requests", body));
    };
  });
  auto* alist = access->add_subcommand("list", "Own requests, or every request for --collection");
  alist->add_option("--collection", collection_filter);
  alist->callback([&] {
    action = [&] {
      httplib::Params params;
      if (collection_filter) params.emplace("collection", *collection_filter);
      output().table(api().get("/access-requests", params), kRequestColumns);
    };
  });
  auto* adecide = access->add_subcommand("decide", "Grant or deny a pending request");
  adecide->add_option("request_id", request_id)->required();
  auto* grant_opt = adecide->add_flag("--grant", grant_flag);
  auto* deny_opt = adecide->add_flag("--deny", deny_flag);
  grant_opt->excludes(deny_opt);
  adecide->callback([&] {
    action = [&] {
      if (!grant_flag && !deny_flag) throw validation_error("decision", "pass --grant or --deny");
      output().object(api().send("POST", "/access-requests/" + path_escape(request_id) + "/decision",
                                 {{"decision", grant_flag ? "granted" : "denied"}}));
    };
  });

  // visas
  auto* visas = app.add_subcommand("visas", "Collection visas")->require_subcommand(1);
  std::string visa_id;
  auto* vgrant = visas->add_subcommand("grant", "Grant a user access");
  vgrant->add_option("visa_id", visa_id)->required();
  vgrant->add_option("user_id", user_id)->required();
  vgrant->callback([&] {
    action = [&] {
      output().object(api().send("POST", "/visas/" + path_escape(visa_id) + "/grants", {{"user_id", user_id}}));
    };
  });
  auto* vrevoke = visas->add_subcommand("revoke", "Revoke a user's access");
  vrevoke->add_option("visa_id", visa_id)->required();
  vrevoke->add_option("user_id", user_id)->required();
  vrevoke->callback([&] {
    action = [&] {
      output().object(
          api().send("DELETE", "/visas/" + path_escape(visa_id) + "/grants/" + path_escape(user_id)));
    };
  });

  // admin
  auto* admin = app.add_subcommand("admin", "Deployment and maintenance")->require_subcommand(1);
  std::optional<std::string> config_path, host;
  std::optional<int> port;
  bool dev_insecure = false;
  auto* aserve = admin->add_subcommand("serve", "Run the gateway in this process");
  aserve->add_option("--config", config_path, "Service config (JSON)");
  aserve->add_option("--host", host);
  aserve->add_option("--port", port);
  aserve->add_flag("--dev-insecure", dev_insecure, "Use an ephemeral secret key if LAKEHOUSE_SECRET_KEY is unset");
  auto load_config = [&] {
    auto config = config_path ? gateway::Config::load(*config_path) : gateway::Config{};
    if (host) config.host = *host;
    if (port) config.port = *port;
    return config;
  };
  auto deployment = [&] {
    gateway::DeploymentOptions o;
    o.secret_key = env(std::string(governance::kSecretKeyEnv));
    o.dev_insecure = dev_insecure;
    return o;
  };
  std::optional<int> serve_status;
  aserve->callback([&] { action = [&] { serve_status = serve(load_config(), deployment(), out); }; });

  auto* janitor = admin->add_subcommand("janitor", "Upload reconciliation")->require_subcommand(1);
  auto* jsweep = janitor->add_subcommand("sweep", "Settle expired upload tickets now");
  jsweep->callback([&] {
    action = [&] {
      const auto data = api().send("POST", "/admin/janitor/sweep");
      output().message(data.value("summary", std::string()), data);
    };
  });
  bool no_orphans = false;
  auto* jreconcile = janitor->add_subcommand("reconcile", "Full catalogue/storage cross-check (local)");
  jreconcile->add_option("--config", config_path, "Service config (JSON)")->required();
  jreconcile->add_flag("--dev-insecure", dev_insecure);
  jreconcile->add_flag("--no-orphans", no_orphans, "Skip listing unreferenced objects");
  jreconcile->callback([&] {
    action = [&] {
      gateway::Lakehouse lake(load_config(), deployment());
      const auto report = lake.janitor.reconcile_full(!no_orphans);
      auto data = janitor::to_json(report);
      data["summary"] = janitor::summary_line(report);
      const auto o = output();
      if (o.json_mode || o.quiet) {
        o.message("", data);
        return;
      }
      out << data["summary"].get<std::string>() << "\n";
      for (const auto& f : report.flagged) out << "flagged " << f.file_id << " " << f.storage_path << "\n";
      for (const auto& id : report.purged) out << "purged " << id << "\n";
      for (const auto& id : report.committed) out << "committed " << id << "\n";
      for (const auto& p : report.orphans) out << "orphan " << p << "\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    profiles.emplace(ProfileStore::default_path(env));
    profile = profiles->load(profile_name);
    if (action) action();
    return serve_status.value_or(kExitOk);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    for (const auto& d : e.details()) err << "  " << d.field << ": " << d.issue << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return exit_code_for(ErrorCode::kInternal);
  }
}

}  // namespace lake::cli
