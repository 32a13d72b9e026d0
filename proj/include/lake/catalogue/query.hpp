#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lake/catalogue/types.hpp"

namespace lake::catalogue {

enum class QueryField { kFileName, kFileCategory, kCollectionId, kVersion, kStatus, kBucket };

std::string_view to_string(QueryField f);
std::optional<QueryField> parse_query_field(std::string_view name);

/// Conjunction of exact-match predicates over the allowed file fields, at
/// most one per field. The empty conjunction matches every record.
class FileQuery {
 public:
  class Builder {
   public:
    /// Validation error on a duplicate field or a value out of the field's
    /// domain (unknown category/status, non-positive version).
    Builder& where(QueryField field, std::string value);
    /// Parses one "field=value" token.
    Builder& where(std::string_view token);
    Builder& page(Page page);
    FileQuery build() const;

   private:
    std::map<QueryField, std::string> predicates_;
    std::optional<Page> page_;
  };

  static FileQuery parse(std::span<const std::string> tokens);

  bool matches(const FileRecord& record) const;
  const std::map<QueryField, std::string>& predicates() const { return predicates_; }
  const std::optional<Page>& page() const { return page_; }

 private:
  std::map<QueryField, std::string> predicates_;
  std::optional<Page> page_;
};

}  // namespace lake::catalogue
