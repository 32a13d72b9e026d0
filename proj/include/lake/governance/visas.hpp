#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/governance/users.hpp"
#include "lake/store/document_store.hpp"

namespace lake::governance {

enum class GrantAction { kGrant, kRevoke };

struct VisaEvent {
  std::uint64_t sequence = 0;
  std::string user_id;
  GrantAction action = GrantAction::kGrant;
  std::string actor_id;
  Timestamp at;
};

struct Grant {
  std::string user_id;
  Timestamp granted_at;
  std::optional<Timestamp> revoked_at;
};

/// Per-collection access credential. The event log is the source of truth;
/// grants are a projection of it.
struct Visa {
  std::string visa_id;
  std::string collection_id;
  std::string issuer_id;
  Timestamp issued_at;
  std::vector<VisaEvent> events;

  /// Latest grant interval per user, ordered by user id.
  std::vector<Grant> grants() const;
  /// True when the latest event for the user is a grant. The issuer is
  /// always granted regardless of events.
  bool is_granted(std::string_view user_id) const;
};

nlohmann::json to_public_json(const Visa& visa);

/// The broker contract. The internal broker keeps visas in the catalogue
/// store; an external passport broker can implement the same interface.
class VisaBroker {
 public:
  virtual ~VisaBroker() = default;

  virtual Visa issue(std::string_view collection_id, std::string_view owner_id) = 0;
  virtual std::optional<Visa> find(std::string_view visa_id) const = 0;
  /// Appends one event. Caller authorization is checked by the caller.
  virtual Visa append(std::string_view visa_id, std::string_view subject_id, GrantAction action,
                      std::string_view actor_id) = 0;
  /// Deletes a visa whose subject collection never came into existence.
  virtual void retire(std::string_view visa_id) = 0;
};

class InternalVisaBroker final : public VisaBroker {
 public:
  InternalVisaBroker(store::DocumentStore& store, const Clock& clock) : store_(store), clock_(clock) {}

  Visa issue(std::string_view collection_id, std::string_view owner_id) override;
  std::optional<Visa> find(std::string_view visa_id) const override;
  Visa append(std::string_view visa_id, std::string_view subject_id, GrantAction action,
              std::string_view actor_id) override;
  void retire(std::string_view visa_id) override;

 private:
  store::DocumentStore& store_;
  const Clock& clock_;
};

/// What access control needs to know about a collection.
struct CollectionRef {
  std::string collection_id;
  std::string owner_id;
  std::string visa_id;
};

class CollectionDirectory {
 public:
  virtual ~CollectionDirectory() = default;
  virtual std::optional<CollectionRef> find_collection(std::string_view collection_id) const = 0;
};

class AccessControl {
 public:
  AccessControl(VisaBroker& broker, const UserService& users) : broker_(broker), users_(users) {}

  /// Owner, data manager, or an active visa grant.
  bool check_access(const Principal& user, const CollectionRef& collection) const;

  /// Grant/revoke on behalf of `actor`, who must own the collection or be a
  /// data manager. The owner's grant cannot be revoked.
  Visa set_visa_grant(const CollectionRef& collection, std::string_view subject_id, GrantAction action,
                      const Principal& actor);

  VisaBroker& broker() { return broker_; }

 private:
  VisaBroker& broker_;
  const UserService& users_;
};

}  // namespace lake::governance
