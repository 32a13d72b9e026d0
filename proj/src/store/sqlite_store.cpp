#include "lake/store/sqlite_store.hpp"

#include <sqlite3.h>

#include <memory>

#include "lake/common/error.hpp"

namespace lake::store {

namespace {

struct StatementDeleter {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using Statement = std::unique_ptr<sqlite3_stmt, StatementDeleter>;

Statement prepare(sqlite3* db, const char* sql) {
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(db, sql, -1, &raw, nullptr) != SQLITE_OK) {
    fail(ErrorCode::kInternal, std::string("store: prepare failed: ") + sqlite3_errmsg(db));
  }
  return Statement(raw);
}

void bind_text(sqlite3_stmt* s, int index, std::string_view text) {
  // A null pointer would bind SQL NULL rather than the empty string.
  sqlite3_bind_text(s, index, text.empty() ? "" : text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
}

std::string column_text(sqlite3_stmt* s, int col) {
  const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(s, col));
  return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(s, col))) : std::string();
}

}  // namespace

SqliteStore::SqliteStore(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  if (sqlite3_open(file.string().c_str(), &db_) != SQLITE_OK) {
    std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    fail(ErrorCode::kInternal, "store: cannot open " + file.string() + ": " + message);
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("PRAGMA journal_mode=WAL");
  exec("PRAGMA synchronous=NORMAL");
  exec(
      "CREATE TABLE IF NOT EXISTS documents ("
      " keyspace TEXT NOT NULL, key TEXT NOT NULL, revision INTEGER NOT NULL, body TEXT NOT NULL,"
      " PRIMARY KEY (keyspace, key)) WITHOUT ROWID");
  exec("CREATE TABLE IF NOT EXISTS revision_counter (id INTEGER PRIMARY KEY CHECK (id = 1), next INTEGER NOT NULL)");
  exec("INSERT OR IGNORE INTO revision_counter (id, next) VALUES (1, 1)");
}

SqliteStore::~SqliteStore() {
  if (db_) sqlite3_close(db_);
}

void SqliteStore::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string message = err ? err : "unknown";
    sqlite3_free(err);
    fail(ErrorCode::kInternal, "store: " + message);
  }
}

std::optional<StoredDocument> SqliteStore::get(std::string_view ks, std::string_view key) const {
  std::lock_guard lock(mutex_);
  auto stmt = prepare(db_, "SELECT revision, body FROM documents WHERE keyspace = ?1 AND key = ?2");
  bind_text(stmt.get(), 1, ks);
  bind_text(stmt.get(), 2, key);
  if (sqlite3_step(stmt.get()) != SQLITE_ROW) return std::nullopt;
  return StoredDocument{std::string(key), Document::parse(column_text(stmt.get(), 1)),
                        static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 0))};
}

std::vector<StoredDocument> SqliteStore::scan(std::string_view ks, std::string_view prefix) const {
  std::lock_guard lock(mutex_);
  auto stmt = prepare(db_,
                      "SELECT key, revision, body FROM documents WHERE keyspace = ?1 AND key >= ?2 "
                      "ORDER BY key");
  bind_text(stmt.get(), 1, ks);
  bind_text(stmt.get(), 2, prefix);
  std::vector<StoredDocument> out;
  while (sqlite3_step(stmt.get()) == SQLITE_ROW) {
    std::string key = column_text(stmt.get(), 0);
    if (key.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back({std::move(key), Document::parse(column_text(stmt.get(), 2)),
                   static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 1))});
  }
  return out;
}

bool SqliteStore::commit(const WriteBatch& batch) {
  std::lock_guard lock(mutex_);
  exec("BEGIN IMMEDIATE");
  try {
    auto lookup = prepare(db_, "SELECT revision FROM documents WHERE keyspace = ?1 AND key = ?2");
    for (const auto& op : batch.ops()) {
      if (!op.expected) continue;
      sqlite3_reset(lookup.get());
      bind_text(lookup.get(), 1, op.keyspace);
      bind_text(lookup.get(), 2, op.key);
      std::uint64_t current = kAbsent;
      if (sqlite3_step(lookup.get()) == SQLITE_ROW) {
        current = static_cast<std::uint64_t>(sqlite3_column_int64(lookup.get(), 0));
      }
      if (current != *op.expected) {
        exec("ROLLBACK");
        return false;
      }
    }

    sqlite3_reset(lookup.get());

    auto counter = prepare(db_, "SELECT next FROM revision_counter WHERE id = 1");
    sqlite3_step(counter.get());
    auto next = static_cast<std::uint64_t>(sqlite3_column_int64(counter.get(), 0));
    sqlite3_reset(counter.get());

    auto upsert = prepare(db_,
                          "INSERT INTO documents (keyspace, key, revision, body) VALUES (?1, ?2, ?3, ?4) "
                          "ON CONFLICT (keyspace, key) DO UPDATE SET revision = excluded.revision, "
                          "body = excluded.body");
    auto remove = prepare(db_, "DELETE FROM documents WHERE keyspace = ?1 AND key = ?2");
    for (const auto& op : batch.ops()) {
      sqlite3_stmt* s = nullptr;
      if (op.kind == WriteBatch::Op::Kind::kPut) {
        s = upsert.get();
        sqlite3_reset(s);
        sqlite3_bind_int64(s, 3, static_cast<sqlite3_int64>(next++));
        bind_text(s, 4, op.doc.dump());
      } else if (op.kind == WriteBatch::Op::Kind::kErase) {
        s = remove.get();
        sqlite3_reset(s);
      } else {
        continue;
      }
      bind_text(s, 1, op.keyspace);
      bind_text(s, 2, op.key);
      if (sqlite3_step(s) != SQLITE_DONE) {
        fail(ErrorCode::kInternal, std::string("store: write failed: ") + sqlite3_errmsg(db_));
      }
      sqlite3_reset(s);
    }

    auto bump = prepare(db_, "UPDATE revision_counter SET next = ?1 WHERE id = 1");
    sqlite3_bind_int64(bump.get(), 1, static_cast<sqlite3_int64>(next));
    sqlite3_step(bump.get());
    exec("COMMIT");
    ++commits_;
    return true;
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
}

std::uint64_t SqliteStore::generation() const {
  std::lock_guard lock(mutex_);
  // data_version only moves for commits from other connections.
  auto stmt = prepare(db_, "PRAGMA data_version");
  sqlite3_step(stmt.get());
  const auto external = static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 0));
  return (commits_ << 32) + external;
}

}  // namespace lake::store
