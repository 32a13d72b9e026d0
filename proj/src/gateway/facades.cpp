#include "lake/gateway/facades.hpp"

#include "lake/common/error.hpp"

namespace lake::gateway {

namespace {

json records_page(std::vector<catalogue::FileRecord> records, catalogue::Page page) {
  return listing_json(catalogue::paginate(std::move(records), page));
}

void require_data_manager(const Principal& caller) {
  if (!caller.is_data_manager()) fail(ErrorCode::kForbidden, "data-manager role required");
}

}  // namespace

// Governance

Principal GovernanceFacade::authenticate(std::string_view bearer_token) const {
  return lake_.users.authenticate(bearer_token);
}

json GovernanceFacade::login(LoginPayload p) {
  return to_public_json(lake_.users.login(p.login, std::move(p.password)));
}

json GovernanceFacade::create_user(const std::optional<Principal>& caller, CreateUserPayload p) {
  return to_public_json(lake_.users.create(caller, {p.email, p.login, std::move(p.password), p.role}));
}

json GovernanceFacade::update_user(const Principal& caller, std::string_view user_id, UpdateUserPayload p) {
  return to_public_json(lake_.users.update(caller, user_id, {p.email, p.login, std::move(p.password), p.role}));
}

json GovernanceFacade::delete_user(const Principal& caller, std::string_view user_id) {
  lake_.users.remove(caller, user_id);
  return {{"id", user_id}, {"deleted", true}};
}

json GovernanceFacade::password_reset(const std::optional<Principal>& caller, std::string_view user_id,
                                      PasswordResetPayload p) {
  if (p.reset_token) {
    lake_.users.complete_password_reset(user_id, *p.reset_token, std::move(*p.new_password));
    return {{"user_id", user_id}, {"reset", true}};
  }
  if (!caller) fail(ErrorCode::kAuthentication, "authentication required");
  const auto token = lake_.users.issue_password_reset(*caller, user_id);
  return {{"user_id", user_id}, {"reset_token", token}};
}

json GovernanceFacade::add_credential(const Principal& caller, CredentialPayload p) {
  return to_public_json(lake_.credentials.add(caller, p.storage_type, std::move(p.label), std::move(p.secret)));
}

json GovernanceFacade::submit_request(const Principal& caller, AccessRequestPayload p) {
  return to_public_json(lake_.requests.submit(caller, p.collection_id, std::move(p.message)));
}

json GovernanceFacade::list_requests(const Principal& caller, const std::optional<std::string>& collection_id) {
  json items = json::array();
  for (const auto& r : lake_.requests.list(caller, collection_id)) items.push_back(to_public_json(r));
  const auto total = items.size();
  return {{"items", std::move(items)}, {"total", total}};
}

json GovernanceFacade::decide_request(const Principal& caller, std::string_view request_id, DecisionPayload p) {
  return to_public_json(lake_.requests.decide(caller, request_id, p.grant));
}

governance::CollectionRef GovernanceFacade::visa_collection(std::string_view visa_id) const {
  const auto visa = lake_.visas.find(visa_id);
  if (!visa) fail(ErrorCode::kNotFound, "visa not found");
  const auto ref = lake_.catalogue.find_collection(visa->collection_id);
  if (!ref) fail(ErrorCode::kNotFound, "collection not found");
  return *ref;
}

json GovernanceFacade::grant(const Principal& caller, std::string_view visa_id, GrantPayload p) {
  return to_public_json(
      lake_.access.set_visa_grant(visa_collection(visa_id), p.user_id, governance::GrantAction::kGrant, caller));
}

json GovernanceFacade::revoke(const Principal& caller, std::string_view visa_id, std::string_view user_id) {
  return to_public_json(
      lake_.access.set_visa_grant(visa_collection(visa_id), user_id, governance::GrantAction::kRevoke, caller));
}

// Catalogue

json CatalogueFacade::list_collections(catalogue::Page page) {
  return listing_json(lake_.catalogue.list_collections(page));
}

json CatalogueFacade::create_collection(const Principal& caller, CreateCollectionPayload p) {
  return to_public_json(
      lake_.catalogue.create_collection(caller, std::move(p.name), p.storage_type, std::move(p.bucket)));
}

json CatalogueFacade::show_collection(const Principal& caller, std::string_view collection_id) {
  auto out = to_public_json(lake_.catalogue.get_collection(collection_id));
  out["has_access"] = lake_.catalogue.check_access(caller, collection_id);
  return out;
}

json CatalogueFacade::list_files(std::string_view collection_id, catalogue::Page page) {
  return listing_json(lake_.catalogue.list_files(collection_id, page));
}

json CatalogueFacade::basic_search(std::string_view keyword, catalogue::Page page) {
  return records_page(lake_.catalogue.basic_search(keyword), page);
}

json CatalogueFacade::advanced_search(AdvancedSearchPayload p) {
  return records_page(lake_.catalogue.advanced_search(p.query), p.page);
}

json CatalogueFacade::upload_request(const Principal& caller, UploadRequestPayload p) {
  const auto collection = lake_.catalogue.get_collection(p.collection_id);
  const catalogue::DedupKey key{p.file_name, collection.id, p.file_category, p.bucket.value_or(collection.bucket)};
  const auto record = lake_.catalogue.register_file(caller, key, p.version);
  try {
    const auto ticket = lake_.transfers.issue_upload_ticket(record);
    return {{"file", to_public_json(record)}, {"ticket", to_public_json(ticket)}};
  } catch (...) {
    (void)lake_.catalogue.purge_pending(record.id);
    throw;
  }
}

json CatalogueFacade::commit(const Principal& caller, std::string_view file_id, CommitPayload p) {
  const auto record = lake_.catalogue.get_file(file_id);
  if (record.uploaded_by != caller.user_id && !caller.is_data_manager()) {
    fail(ErrorCode::kForbidden, "only the uploader may commit this file");
  }
  return to_public_json(lake_.janitor.commit_upload(file_id, p.size_bytes, std::move(p.checksum)).record);
}

// Storage

json StorageFacade::list_buckets() {
  json items = json::array();
  for (const auto& t : lake_.targets.list()) items.push_back(to_public_json(t));
  const auto total = items.size();
  return {{"items", std::move(items)}, {"total", total}};
}

json StorageFacade::register_bucket(const Principal& caller, RegisterBucketPayload p) {
  return to_public_json(lake_.targets.register_target(caller, p.storage_type, std::move(p.bucket),
                                                      std::move(p.credential_id), std::move(p.endpoint)));
}

json StorageFacade::download_url(const Principal& caller, std::string_view file_id) {
  return to_public_json(lake_.transfers.issue_download_url(lake_.catalogue.get_file(file_id), caller));
}

json StorageFacade::accept_upload(std::string_view ticket_id, std::span<const std::uint8_t> bytes) {
  lake_.transfers.accept_upload(ticket_id, bytes);
  return {{"size_bytes", bytes.size()}};
}

Bytes StorageFacade::serve_download(std::string_view grant_id) { return lake_.transfers.serve_download(grant_id); }

// Janitor

json JanitorFacade::sweep(const Principal& caller) {
  require_data_manager(caller);
  const auto report = lake_.janitor.sweep();
  auto out = janitor::to_json(report);
  out["summary"] = janitor::summary_line(report);
  return out;
}

}  // namespace lake::gateway
