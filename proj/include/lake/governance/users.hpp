#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/common/types.hpp"
#include "lake/governance/password.hpp"
#include "lake/store/document_store.hpp"

namespace lake::governance {

struct User {
  std::string id;
  std::string email;
  std::string login;
  std::string password_hash;
  Role role = Role::kConsumer;
  Timestamp created_at;
};

/// Authenticated caller, resolved from a bearer token.
struct Principal {
  std::string user_id;
  Role role = Role::kConsumer;

  bool is_data_manager() const { return role == Role::kDataManager; }
};

struct AuthToken {
  std::string token;
  std::string user_id;
  Timestamp issued_at;
  Timestamp expires_at;
};

struct NewUser {
  std::string email;
  std::string login;
  std::string password;
  Role role = Role::kConsumer;
};

struct UserUpdate {
  std::optional<std::string> email;
  std::optional<std::string> login;
  std::optional<std::string> password;
  std::optional<Role> role;
};

/// Without password_hash; safe to return to clients.
nlohmann::json to_public_json(const User& user);
nlohmann::json to_public_json(const AuthToken& token);

bool is_valid_email(std::string_view email);
bool is_valid_login(std::string_view login);

class UserService {
 public:
  struct Options {
    Duration token_ttl = std::chrono::hours(12);
    Duration reset_ttl = std::chrono::hours(1);
    /// Anonymous callers may self-register as consumer or publisher.
    bool open_registration = true;
    std::size_t min_password_length = 8;
  };

  UserService(store::DocumentStore& store, const Clock& clock, PasswordHasher hasher, Options options);

  /// `actor` is empty for anonymous registration. The very first account
  /// may take any role so a deployment can bootstrap its data manager.
  User create(const std::optional<Principal>& actor, NewUser request);
  User update(const Principal& actor, std::string_view user_id, UserUpdate update);
  void remove(const Principal& actor, std::string_view user_id);

  /// Data-manager only. Returns a one-time reset token.
  std::string issue_password_reset(const Principal& actor, std::string_view user_id);
  void complete_password_reset(std::string_view user_id, std::string_view reset_token,
                               std::string new_password);

  /// Same authentication error for unknown users and wrong passwords.
  AuthToken login(std::string_view login_or_email, std::string password);
  Principal authenticate(std::string_view bearer_token) const;

  std::optional<User> find(std::string_view user_id) const;
  User get(std::string_view user_id) const;

 private:
  std::optional<User> find_by_login_or_email(std::string_view login_or_email) const;

  store::DocumentStore& store_;
  const Clock& clock_;
  PasswordHasher hasher_;
  Options options_;
};

}  // namespace lake::governance
