#include "lake/governance/access_requests.hpp"

#include <algorithm>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::governance {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

std::optional<RequestStatus> parse_status(std::string_view s) {
  if (s == "pending") return RequestStatus::kPending;
  if (s == "granted") return RequestStatus::kGranted;
  if (s == "denied") return RequestStatus::kDenied;
  return std::nullopt;
}

json to_document(const AccessRequest& r) {
  json d{{"request_id", r.request_id},
         {"requester_id", r.requester_id},
         {"collection_id", r.collection_id},
         {"status", to_string(r.status)},
         {"submitted_at", format_timestamp(r.submitted_at)}};
  d["message"] = r.message ? json(*r.message) : json(nullptr);
  d["decided_by"] = r.decided_by ? json(*r.decided_by) : json(nullptr);
  d["decided_at"] = r.decided_at ? json(format_timestamp(*r.decided_at)) : json(nullptr);
  return d;
}

AccessRequest from_document(const json& d) {
  AccessRequest r;
  r.request_id = d.at("request_id").get<std::string>();
  r.requester_id = d.at("requester_id").get<std::string>();
  r.collection_id = d.at("collection_id").get<std::string>();
  r.status = parse_status(d.at("status").get<std::string>()).value_or(RequestStatus::kPending);
  r.submitted_at = parse_timestamp(d.at("submitted_at").get<std::string>()).value_or(Timestamp{});
  if (d.contains("message") && d["message"].is_string()) r.message = d["message"].get<std::string>();
  if (d.contains("decided_by") && d["decided_by"].is_string()) r.decided_by = d["decided_by"].get<std::string>();
  if (d.contains("decided_at") && d["decided_at"].is_string()) {
    r.decided_at = parse_timestamp(d["decided_at"].get<std::string>());
  }
  return r;
}

std::string pending_key(std::string_view collection_id, std::string_view user_id) {
  return std::string(collection_id) + "/" + std::string(user_id);
}

}  // namespace

std::string_view to_string(RequestStatus s) {
  switch (s) {
    case RequestStatus::kPending: return "pending";
    case RequestStatus::kGranted: return "granted";
    case RequestStatus::kDenied: return "denied";
  }
  return "pending";
}

json to_public_json(const AccessRequest& r) { return to_document(r); }

CollectionRef AccessRequestService::collection(std::string_view collection_id) const {
  auto ref = collections_.find_collection(collection_id);
  if (!ref) fail(ErrorCode::kNotFound, "collection not found");
  return *ref;
}

AccessRequest AccessRequestService::submit(const Principal& requester, std::string_view collection_id,
                                           std::optional<std::string> message) {
  const auto ref = collection(collection_id);
  if (access_.check_access(requester, ref)) fail(ErrorCode::kConflict, "access already granted");

  AccessRequest request{new_id(), requester.user_id, ref.collection_id, std::move(message),
                        RequestStatus::kPending, clock_.now(), std::nullopt, std::nullopt};
  store::WriteBatch batch;
  batch.put(ks::kPendingRequests, pending_key(ref.collection_id, requester.user_id),
            json{{"request_id", request.request_id}}, store::kAbsent);
  batch.put(ks::kRequests, request.request_id, to_document(request), store::kAbsent);
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "a request for this collection is already pending");
  return request;
}

std::vector<AccessRequest> AccessRequestService::list(const Principal& caller,
                                                      const std::optional<std::string>& collection_id) const {
  std::optional<CollectionRef> ref;
  if (collection_id) {
    ref = collection(*collection_id);
    if (caller.user_id != ref->owner_id && !caller.is_data_manager()) {
      fail(ErrorCode::kForbidden, "only the collection owner may list its requests");
    }
  }
  std::vector<AccessRequest> out;
  for (const auto& doc : store_.scan(ks::kRequests)) {
    auto r = from_document(doc.doc);
    if (ref ? r.collection_id == ref->collection_id : r.requester_id == caller.user_id) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const AccessRequest& a, const AccessRequest& b) {
    return std::tie(a.submitted_at, a.request_id) < std::tie(b.submitted_at, b.request_id);
  });
  return out;
}

AccessRequest AccessRequestService::decide(const Principal& actor, std::string_view request_id, bool grant) {
  auto stored = store_.get(ks::kRequests, request_id);
  if (!stored) fail(ErrorCode::kNotFound, "access request not found");
  AccessRequest request = from_document(stored->doc);
  const auto ref = collection(request.collection_id);
  if (actor.user_id != ref.owner_id && !actor.is_data_manager()) {
    fail(ErrorCode::kForbidden, "only the collection owner may decide requests");
  }
  if (request.status != RequestStatus::kPending) fail(ErrorCode::kConflict, "request already decided");

  request.status = grant ? RequestStatus::kGranted : RequestStatus::kDenied;
  request.decided_by = actor.user_id;
  request.decided_at = clock_.now();
  store::WriteBatch batch;
  batch.put(ks::kRequests, request.request_id, to_document(request), stored->revision);
  batch.erase(ks::kPendingRequests, pending_key(request.collection_id, request.requester_id));
  // The CAS settles the request exactly once; only the winner touches the visa.
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "request already decided");
  if (grant) access_.set_visa_grant(ref, request.requester_id, GrantAction::kGrant, actor);
  return request;
}

}  // namespace lake::governance
