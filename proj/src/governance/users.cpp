#include "lake/governance/users.hpp"

#include <algorithm>
#include <cctype>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::governance {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

json to_document(const User& u) {
  return {{"id", u.id},
          {"email", u.email},
          {"login", u.login},
          {"password_hash", u.password_hash},
          {"role", to_string(u.role)},
          {"created_at", format_timestamp(u.created_at)}};
}

User from_document(const json& d) {
  User u;
  u.id = d.at("id").get<std::string>();
  u.email = d.at("email").get<std::string>();
  u.login = d.at("login").get<std::string>();
  u.password_hash = d.at("password_hash").get<std::string>();
  u.role = parse_role(d.at("role").get<std::string>()).value_or(Role::kConsumer);
  u.created_at = parse_timestamp(d.at("created_at").get<std::string>()).value_or(Timestamp{});
  return u;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

Error password_too_short(std::size_t min) {
  return validation_error("password", "must be at least " + std::to_string(min) + " characters");
}

Error bad_credentials() { return Error(ErrorCode::kAuthentication, "invalid credentials"); }

}  // namespace

json to_public_json(const User& u) {
  return {{"id", u.id},
          {"email", u.email},
          {"login", u.login},
          {"role", to_string(u.role)},
          {"created_at", format_timestamp(u.created_at)}};
}

json to_public_json(const AuthToken& t) {
  return {{"token", t.token},
          {"user_id", t.user_id},
          {"issued_at", format_timestamp(t.issued_at)},
          {"expires_at", format_timestamp(t.expires_at)}};
}

bool is_valid_email(std::string_view email) {
  if (email.size() < 3 || email.size() > 254) return false;
  const auto at = email.find('@');
  if (at == std::string_view::npos || at == 0 || email.find('@', at + 1) != std::string_view::npos) return false;
  const auto domain = email.substr(at + 1);
  const auto dot = domain.find('.');
  if (dot == std::string_view::npos || dot == 0 || domain.back() == '.') return false;
  return std::none_of(email.begin(), email.end(),
                      [](unsigned char c) { return std::isspace(c) || std::iscntrl(c); });
}

bool is_valid_login(std::string_view login) {
  if (login.empty() || login.size() > 64) return false;
  return std::all_of(login.begin(), login.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

UserService::UserService(store::DocumentStore& store, const Clock& clock, PasswordHasher hasher,
                         Options options)
    : store_(store), clock_(clock), hasher_(hasher), options_(options) {}

User UserService::create(const std::optional<Principal>& actor, NewUser request) {
  std::vector<FieldIssue> issues;
  if (!is_valid_email(request.email)) issues.push_back({"email", "not a valid email address"});
  if (!is_valid_login(request.login)) issues.push_back({"login", "1-64 characters of [A-Za-z0-9._-]"});
  if (request.password.size() < options_.min_password_length) {
    issues.push_back({"password", "must be at least " + std::to_string(options_.min_password_length) + " characters"});
  }
  if (!issues.empty()) {
    secure_wipe(request.password);
    throw Error(ErrorCode::kValidation, "invalid user", std::move(issues));
  }

  const bool bootstrap = store_.scan(ks::kUsers).empty();
  const bool manager = actor && actor->is_data_manager();
  if (!bootstrap && !manager) {
    if (!options_.open_registration && !actor) {
      secure_wipe(request.password);
      fail(ErrorCode::kAuthentication, "registration requires a data manager");
    }
    if (!options_.open_registration || request.role == Role::kDataManager) {
      secure_wipe(request.password);
      fail(ErrorCode::kForbidden, "only a data manager may create this account");
    }
  }

  User user{new_id(), request.email, request.login, hasher_.hash(request.password), request.role,
            clock_.now()};
  secure_wipe(request.password);

  store::WriteBatch batch;
  batch.put(ks::kUserEmails, lower(user.email), json{{"user_id", user.id}}, store::kAbsent);
  batch.put(ks::kUserLogins, user.login, json{{"user_id", user.id}}, store::kAbsent);
  batch.put(ks::kUsers, user.id, to_document(user), store::kAbsent);
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "email or login already registered");
  return user;
}

std::optional<User> UserService::find(std::string_view user_id) const {
  auto doc = store_.get(ks::kUsers, user_id);
  if (!doc) return std::nullopt;
  return from_document(doc->doc);
}

User UserService::get(std::string_view user_id) const {
  auto user = find(user_id);
  if (!user) fail(ErrorCode::kNotFound, "user not found");
  return *user;
}

User UserService::update(const Principal& actor, std::string_view user_id, UserUpdate update) {
  if (actor.user_id != user_id && !actor.is_data_manager()) {
    fail(ErrorCode::kForbidden, "users may only update their own account");
  }
  if (update.role && !actor.is_data_manager()) fail(ErrorCode::kForbidden, "only a data manager may change roles");
  std::vector<FieldIssue> issues;
  if (update.email && !is_valid_email(*update.email)) issues.push_back({"email", "not a valid email address"});
  if (update.login && !is_valid_login(*update.login)) issues.push_back({"login", "1-64 characters of [A-Za-z0-9._-]"});
  if (update.password && update.password->size() < options_.min_password_length) {
    issues.push_back({"password", "must be at least " + std::to_string(options_.min_password_length) + " characters"});
  }
  if (!issues.empty()) {
    if (update.password) secure_wipe(*update.password);
    throw Error(ErrorCode::kValidation, "invalid user update", std::move(issues));
  }

  auto stored = store_.get(ks::kUsers, user_id);
  if (!stored) fail(ErrorCode::kNotFound, "user not found");
  User user = from_document(stored->doc);

  store::WriteBatch batch;
  if (update.email && lower(*update.email) != lower(user.email)) {
    auto old = store_.get(ks::kUserEmails, lower(user.email));
    batch.erase(ks::kUserEmails, lower(user.email), old ? old->revision : store::kAbsent);
    batch.put(ks::kUserEmails, lower(*update.email), json{{"user_id", user.id}}, store::kAbsent);
  }
  if (update.email) user.email = *update.email;
  if (update.login && *update.login != user.login) {
    auto old = store_.get(ks::kUserLogins, user.login);
    batch.erase(ks::kUserLogins, user.login, old ? old->revision : store::kAbsent);
    batch.put(ks::kUserLogins, *update.login, json{{"user_id", user.id}}, store::kAbsent);
    user.login = *update.login;
  }
  if (update.password) {
    user.password_hash = hasher_.hash(*update.password);
    secure_wipe(*update.password);
  }
  if (update.role) user.role = *update.role;
  batch.put(ks::kUsers, user.id, to_document(user), stored->revision);
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "email or login already registered");
  return user;
}

void UserService::remove(const Principal& actor, std::string_view user_id) {
  if (actor.user_id != user_id && !actor.is_data_manager()) {
    fail(ErrorCode::kForbidden, "users may only delete their own account");
  }
  auto stored = store_.get(ks::kUsers, user_id);
  if (!stored) fail(ErrorCode::kNotFound, "user not found");
  const User user = from_document(stored->doc);
  store::WriteBatch batch;
  batch.erase(ks::kUsers, user.id, stored->revision);
  batch.erase(ks::kUserEmails, lower(user.email));
  batch.erase(ks::kUserLogins, user.login);
  for (const auto& t : store_.scan(ks::kTokens)) {
    if (t.doc.value("user_id", "") == user.id) batch.erase(ks::kTokens, t.key);
  }
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "user changed concurrently");
}

std::string UserService::issue_password_reset(const Principal& actor, std::string_view user_id) {
  if (!actor.is_data_manager()) fail(ErrorCode::kForbidden, "only a data manager may issue password resets");
  const User user = get(user_id);
  std::string token = new_secret_token();
  const auto now = clock_.now();
  // Keyed by user so a newer reset supersedes an older one.
  store_.put(ks::kResetTokens, user.id,
             json{{"digest", sha256_hex(token)},
                  {"expires_at", format_timestamp(now + options_.reset_ttl)}});
  return token;
}

void UserService::complete_password_reset(std::string_view user_id, std::string_view reset_token,
                                          std::string new_password) {
  auto reset = store_.get(ks::kResetTokens, user_id);
  const auto now = clock_.now();
  const bool valid =
      reset && reset->doc.value("digest", "") == sha256_hex(reset_token) &&
      parse_timestamp(reset->doc.value("expires_at", "")).value_or(Timestamp{}) > now;
  if (!valid) {
    secure_wipe(new_password);
    fail(ErrorCode::kAuthentication, "invalid or expired reset token");
  }
  if (new_password.size() < options_.min_password_length) {
    secure_wipe(new_password);
    throw password_too_short(options_.min_password_length);
  }
  auto stored = store_.get(ks::kUsers, user_id);
  if (!stored) {
    secure_wipe(new_password);
    fail(ErrorCode::kNotFound, "user not found");
  }
  User user = from_document(stored->doc);
  user.password_hash = hasher_.hash(new_password);
  secure_wipe(new_password);

  store::WriteBatch batch;
  batch.erase(ks::kResetTokens, user.id, reset->revision);
  batch.put(ks::kUsers, user.id, to_document(user), stored->revision);
  for (const auto& t : store_.scan(ks::kTokens)) {
    if (t.doc.value("user_id", "") == user.id) batch.erase(ks::kTokens, t.key);
  }
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "reset token already used");
}

std::optional<User> UserService::find_by_login_or_email(std::string_view login_or_email) const {
  auto index = store_.get(ks::kUserLogins, login_or_email);
  if (!index) index = store_.get(ks::kUserEmails, lower(login_or_email));
  if (!index) return std::nullopt;
  return find(index->doc.value("user_id", ""));
}

AuthToken UserService::login(std::string_view login_or_email, std::string password) {
  const auto user = find_by_login_or_email(login_or_email);
  const bool ok = user ? hasher_.verify(password, user->password_hash)
                       // Burn comparable time so response latency does not reveal unknown accounts.
                       : (hasher_.verify(password, hasher_.hash("placeholder-password")), false);
  secure_wipe(password);
  if (!ok) throw bad_credentials();

  AuthToken token{new_secret_token(), user->id, clock_.now(), clock_.now() + options_.token_ttl};
  // Only the digest is persisted; the bearer value exists client-side.
  store_.put(ks::kTokens, sha256_hex(token.token),
             json{{"user_id", token.user_id},
                  {"issued_at", format_timestamp(token.issued_at)},
                  {"expires_at", format_timestamp(token.expires_at)}});
  return token;
}

Principal UserService::authenticate(std::string_view bearer_token) const {
  if (bearer_token.empty()) fail(ErrorCode::kAuthentication, "missing bearer token");
  auto stored = store_.get(ks::kTokens, sha256_hex(bearer_token));
  if (!stored) fail(ErrorCode::kAuthentication, "invalid token");
  const auto expires = parse_timestamp(stored->doc.value("expires_at", ""));
  if (!expires || *expires <= clock_.now()) fail(ErrorCode::kAuthentication, "token expired");
  auto user = find(stored->doc.value("user_id", ""));
  if (!user) fail(ErrorCode::kAuthentication, "invalid token");
  return Principal{user->id, user->role};
}

}  // namespace lake::governance
