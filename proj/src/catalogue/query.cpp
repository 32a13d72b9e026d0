#include "lake/catalogue/query.hpp"

#include <array>
#include <charconv>

#include "lake/common/error.hpp"

namespace lake::catalogue {

namespace {

constexpr std::array<std::pair<QueryField, std::string_view>, 6> kFields{{
    {QueryField::kFileName, "file_name"},
    {QueryField::kFileCategory, "file_category"},
    {QueryField::kCollectionId, "collection_id"},
    {QueryField::kVersion, "version"},
    {QueryField::kStatus, "status"},
    {QueryField::kBucket, "bucket"},
}};

std::optional<std::uint64_t> parse_version(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0 || v > kMaxVersion) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(QueryField f) {
  for (const auto& [field, name] : kFields) {
    if (field == f) return name;
  }
  return "";
}

std::optional<QueryField> parse_query_field(std::string_view name) {
  for (const auto& [field, n] : kFields) {
    if (n == name) return field;
  }
  return std::nullopt;
}

FileQuery::Builder& FileQuery::Builder::where(QueryField field, std::string value) {
  const std::string name(to_string(field));
  if (predicates_.count(field)) throw validation_error(name, "at most one predicate per field");
  switch (field) {
    case QueryField::kFileCategory:
      if (!parse_file_category(value)) throw validation_error(name, "must be structured or unstructured");
      break;
    case QueryField::kStatus:
      if (!parse_file_status(value)) throw validation_error(name, "must be pending or committed");
      break;
    case QueryField::kVersion: {
      auto v = parse_version(value);
      if (!v) throw validation_error(name, "must be a positive integer");
      value = std::to_string(*v);
      break;
    }
    default:
      if (value.empty()) throw validation_error(name, "must not be empty");
      break;
  }
  predicates_.emplace(field, std::move(value));
  return *this;
}

FileQuery::Builder& FileQuery::Builder::where(std::string_view token) {
  const auto eq = token.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw validation_error("filters", "malformed token '" + std::string(token) + "', expected field=value");
  }
  const auto name = token.substr(0, eq);
  auto field = parse_query_field(name);
  if (!field) throw validation_error(std::string(name), "unknown field");
  return where(*field, std::string(token.substr(eq + 1)));
}

FileQuery::Builder& FileQuery::Builder::page(Page page) {
  page_ = page;
  return *this;
}

FileQuery FileQuery::Builder::build() const {
  FileQuery q;
  q.predicates_ = predicates_;
  q.page_ = page_;
  return q;
}

FileQuery FileQuery::parse(std::span<const std::string> tokens) {
  Builder b;
  for (const auto& t : tokens) b.where(std::string_view(t));
  return std::move(b).build();
}

bool FileQuery::matches(const FileRecord& r) const {
  for (const auto& [field, value] : predicates_) {
    bool ok = false;
    switch (field) {
      case QueryField::kFileName: ok = r.file_name == value; break;
      case QueryField::kFileCategory: ok = to_string(r.file_category) == value; break;
      case QueryField::kCollectionId: ok = r.collection_id == value; break;
      case QueryField::kVersion: ok = std::to_string(r.version) == value; break;
      case QueryField::kStatus: ok = to_string(r.status) == value; break;
      case QueryField::kBucket: ok = r.bucket == value; break;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace lake::catalogue
