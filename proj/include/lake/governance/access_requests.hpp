#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/governance/visas.hpp"
#include "lake/store/document_store.hpp"

namespace lake::governance {

enum class RequestStatus { kPending, kGranted, kDenied };

std::string_view to_string(RequestStatus s);

struct AccessRequest {
  std::string request_id;
  std::string requester_id;
  std::string collection_id;
  std::optional<std::string> message;
  RequestStatus status = RequestStatus::kPending;
  Timestamp submitted_at;
  std::optional<std::string> decided_by;
  std::optional<Timestamp> decided_at;
};

nlohmann::json to_public_json(const AccessRequest& request);

class AccessRequestService {
 public:
  AccessRequestService(store::DocumentStore& store, const Clock& clock, AccessControl& access,
                       const CollectionDirectory& collections)
      : store_(store), clock_(clock), access_(access), collections_(collections) {}

  /// Conflict if the requester already has access or already has a pending
  /// request for the collection.
  AccessRequest submit(const Principal& requester, std::string_view collection_id,
                       std::optional<std::string> message);

  /// With a collection: every request for it (owner or data manager only).
  /// Without: the caller's own requests.
  std::vector<AccessRequest> list(const Principal& caller,
                                  const std::optional<std::string>& collection_id) const;

  /// pending -> granted | denied, exactly once. Granting delegates to
  /// AccessControl::set_visa_grant.
  AccessRequest decide(const Principal& actor, std::string_view request_id, bool grant);

 private:
  CollectionRef collection(std::string_view collection_id) const;

  store::DocumentStore& store_;
  const Clock& clock_;
  AccessControl& access_;
  const CollectionDirectory& collections_;
};

}  // namespace lake::governance
