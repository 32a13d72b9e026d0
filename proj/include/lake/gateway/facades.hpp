#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lake/gateway/lakehouse.hpp"
#include "lake/gateway/validate.hpp"

namespace lake::gateway {

using governance::Principal;
using nlohmann::json;

/// Users, tokens, credentials, visas and access requests.
class GovernanceFacade {
 public:
  explicit GovernanceFacade(Lakehouse& lake) : lake_(lake) {}

  Principal authenticate(std::string_view bearer_token) const;

  json login(LoginPayload p);
  json create_user(const std::optional<Principal>& caller, CreateUserPayload p);
  json update_user(const Principal& caller, std::string_view user_id, UpdateUserPayload p);
  json delete_user(const Principal& caller, std::string_view user_id);
  /// Issue mode needs a data-manager caller; consume mode needs no caller.
  json password_reset(const std::optional<Principal>& caller, std::string_view user_id, PasswordResetPayload p);

  json add_credential(const Principal& caller, CredentialPayload p);

  json submit_request(const Principal& caller, AccessRequestPayload p);
  json list_requests(const Principal& caller, const std::optional<std::string>& collection_id);
  json decide_request(const Principal& caller, std::string_view request_id, DecisionPayload p);

  json grant(const Principal& caller, std::string_view visa_id, GrantPayload p);
  json revoke(const Principal& caller, std::string_view visa_id, std::string_view user_id);

 private:
  governance::CollectionRef visa_collection(std::string_view visa_id) const;

  Lakehouse& lake_;
};

/// Collection and file indexes.
class CatalogueFacade {
 public:
  explicit CatalogueFacade(Lakehouse& lake) : lake_(lake) {}

  json list_collections(catalogue::Page page);
  json create_collection(const Principal& caller, CreateCollectionPayload p);
  json show_collection(const Principal& caller, std::string_view collection_id);
  json list_files(std::string_view collection_id, catalogue::Page page);
  json basic_search(std::string_view keyword, catalogue::Page page);
  json advanced_search(AdvancedSearchPayload p);
  /// Registers the pending record and issues its upload ticket.
  json upload_request(const Principal& caller, UploadRequestPayload p);
  /// Uploader or data manager; idempotent.
  json commit(const Principal& caller, std::string_view file_id, CommitPayload p);

 private:
  Lakehouse& lake_;
};

/// Storage targets and raw transfers.
class StorageFacade {
 public:
  explicit StorageFacade(Lakehouse& lake) : lake_(lake) {}

  json list_buckets();
  json register_bucket(const Principal& caller, RegisterBucketPayload p);
  json download_url(const Principal& caller, std::string_view file_id);
  json accept_upload(std::string_view ticket_id, std::span<const std::uint8_t> bytes);
  Bytes serve_download(std::string_view grant_id);

 private:
  Lakehouse& lake_;
};

class JanitorFacade {
 public:
  explicit JanitorFacade(Lakehouse& lake) : lake_(lake) {}

  /// Data manager only.
  json sweep(const Principal& caller);

 private:
  Lakehouse& lake_;
};

/// Listing envelope payload: {"items", "total", "offset", "limit"}.
template <typename T>
json listing_json(const catalogue::Listing<T>& listing) {
  json items = json::array();
  for (const auto& item : listing.items) items.push_back(to_public_json(item));
  return {{"items", std::move(items)},
          {"total", listing.total},
          {"offset", listing.page.offset},
          {"limit", listing.page.limit}};
}

}  // namespace lake::gateway
