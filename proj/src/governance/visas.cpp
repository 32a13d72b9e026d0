#include "lake/governance/visas.hpp"

#include <map>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::governance {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

std::string_view to_string(GrantAction a) { return a == GrantAction::kGrant ? "grant" : "revoke"; }

Visa from_document(const json& d) {
  Visa v;
  v.visa_id = d.at("visa_id").get<std::string>();
  v.collection_id = d.at("collection_id").get<std::string>();
  v.issuer_id = d.at("issuer_id").get<std::string>();
  v.issued_at = parse_timestamp(d.at("issued_at").get<std::string>()).value_or(Timestamp{});
  for (const auto& e : d.at("events")) {
    v.events.push_back({e.at("sequence").get<std::uint64_t>(), e.at("user_id").get<std::string>(),
                        e.at("action").get<std::string>() == "grant" ? GrantAction::kGrant : GrantAction::kRevoke,
                        e.at("actor_id").get<std::string>(),
                        parse_timestamp(e.at("at").get<std::string>()).value_or(Timestamp{})});
  }
  return v;
}

Visa make_visa(std::string_view collection_id, std::string_view owner_id, Timestamp now) {
  return Visa{new_id(), std::string(collection_id), std::string(owner_id), now, {}};
}

json to_document(const Visa& v) {
  json events = json::array();
  for (const auto& e : v.events) {
    events.push_back({{"sequence", e.sequence},
                      {"user_id", e.user_id},
                      {"action", to_string(e.action)},
                      {"actor_id", e.actor_id},
                      {"at", format_timestamp(e.at)}});
  }
  return {{"visa_id", v.visa_id},
          {"collection_id", v.collection_id},
          {"issuer_id", v.issuer_id},
          {"issued_at", format_timestamp(v.issued_at)},
          {"events", std::move(events)}};
}

}  // namespace

std::vector<Grant> Visa::grants() const {
  std::map<std::string, Grant> latest;
  latest[issuer_id] = Grant{issuer_id, issued_at, std::nullopt};
  for (const auto& e : events) {
    if (e.user_id == issuer_id) continue;
    auto it = latest.find(e.user_id);
    if (e.action == GrantAction::kGrant) {
      if (it == latest.end() || it->second.revoked_at) latest[e.user_id] = Grant{e.user_id, e.at, std::nullopt};
    } else if (it != latest.end() && !it->second.revoked_at) {
      it->second.revoked_at = e.at;
    }
  }
  std::vector<Grant> out;
  out.reserve(latest.size());
  for (auto& [_, g] : latest) out.push_back(std::move(g));
  return out;
}

bool Visa::is_granted(std::string_view user_id) const {
  if (user_id == issuer_id) return true;
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->user_id == user_id) return it->action == GrantAction::kGrant;
  }
  return false;
}

json to_public_json(const Visa& visa) {
  json grants = json::array();
  for (const auto& g : visa.grants()) {
    json entry{{"user_id", g.user_id}, {"granted_at", format_timestamp(g.granted_at)}};
    entry["revoked_at"] = g.revoked_at ? json(format_timestamp(*g.revoked_at)) : json(nullptr);
    entry["active"] = !g.revoked_at.has_value();
    grants.push_back(std::move(entry));
  }
  return {{"visa_id", visa.visa_id},
          {"collection_id", visa.collection_id},
          {"issuer_id", visa.issuer_id},
          {"issued_at", format_timestamp(visa.issued_at)},
          {"grants", std::move(grants)}};
}

Visa InternalVisaBroker::issue(std::string_view collection_id, std::string_view owner_id) {
  Visa visa = make_visa(collection_id, owner_id, clock_.now());
  if (!store_.insert(ks::kVisas, visa.visa_id, to_document(visa))) fail(ErrorCode::kConflict, "visa exists");
  return visa;
}

std::optional<Visa> InternalVisaBroker::find(std::string_view visa_id) const {
  auto doc = store_.get(ks::kVisas, visa_id);
  if (!doc) return std::nullopt;
  return from_document(doc->doc);
}

Visa InternalVisaBroker::append(std::string_view visa_id, std::string_view subject_id, GrantAction action,
                                std::string_view actor_id) {
  // The CAS on the visa document totally orders events per visa.
  for (;;) {
    auto doc = store_.get(ks::kVisas, visa_id);
    if (!doc) fail(ErrorCode::kNotFound, "visa not found");
    Visa visa = from_document(doc->doc);
    const std::uint64_t seq = visa.events.empty() ? 1 : visa.events.back().sequence + 1;
    visa.events.push_back({seq, std::string(subject_id), action, std::string(actor_id), clock_.now()});
    if (store_.compare_and_swap(ks::kVisas, visa_id, doc->revision, to_document(visa))) return visa;
  }
}

void InternalVisaBroker::retire(std::string_view visa_id) { store_.erase(ks::kVisas, visa_id); }

bool AccessControl::check_access(const Principal& user, const CollectionRef& collection) const {
  if (user.is_data_manager() || user.user_id == collection.owner_id) return true;
  auto visa = broker_.find(collection.visa_id);
  return visa && visa->is_granted(user.user_id);
}

Visa AccessControl::set_visa_grant(const CollectionRef& collection, std::string_view subject_id,
                                   GrantAction action, const Principal& actor) {
  if (actor.user_id != collection.owner_id && !actor.is_data_manager()) {
    fail(ErrorCode::kForbidden, "only the collection owner may change its visa");
  }
  if (!users_.find(subject_id)) fail(ErrorCode::kNotFound, "user not found");
  if (subject_id == collection.owner_id) {
    if (action == GrantAction::kRevoke) {
      throw validation_error("user_id", "the owner's grant is permanent");
    }
    auto visa = broker_.find(collection.visa_id);
    if (!visa) fail(ErrorCode::kNotFound, "visa not found");
    return *visa;
  }
  return broker_.append(collection.visa_id, subject_id, action, actor.user_id);
}

}  // namespace lake::governance
