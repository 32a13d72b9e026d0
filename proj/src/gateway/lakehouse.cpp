#include "lake/gateway/lakehouse.hpp"

#include <filesystem>

#include "lake/store/memory_store.hpp"
#include "lake/store/sqlite_store.hpp"

namespace lake::gateway {

namespace {

std::unique_ptr<store::DocumentStore> open_store(const Config& c) {
  if (c.store_kind == StoreKind::kMemory) return std::make_unique<store::MemoryStore>();
  if (c.store_path.has_parent_path()) std::filesystem::create_directories(c.store_path.parent_path());
  return std::make_unique<store::SqliteStore>(c.store_path);
}

governance::Vault open_vault(const DeploymentOptions& o) {
  if (o.secret_key) return governance::Vault(*o.secret_key);
  return governance::Vault::from_environment(o.dev_insecure);
}

storage::TargetRegistry::Options target_options(const Config& c) {
  storage::TargetRegistry::Options o;
  o.local_root = c.local_storage_root;
  for (const auto& t : c.targets) {
    if (t.storage_type == StorageType::kLocal && t.root_dir) o.local_root_overrides[t.bucket] = *t.root_dir;
  }
  o.public_base_url =
      c.public_base_url.empty() ? "http://" + c.host + ":" + std::to_string(c.port) : c.public_base_url;
  return o;
}

}  // namespace

Lakehouse::Lakehouse(Config config, DeploymentOptions options)
    : config_(std::move(config)),
      clock_(options.clock ? options.clock : std::make_shared<SystemClock>()),
      store_(open_store(config_)),
      vault(open_vault(options)),
      users(*store_, *clock_, governance::PasswordHasher(config_.password_hash),
            {.token_ttl = config_.token_ttl, .open_registration = config_.open_registration}),
      visas(*store_, *clock_),
      access(visas, users),
      credentials(*store_, *clock_, vault),
      targets(*store_, *clock_, credentials, target_options(config_)),
      catalogue(*store_, *clock_, targets, access),
      requests(*store_, *clock_, access, catalogue),
      transfers(*store_, *clock_, catalogue,
                {.ticket_ttl = config_.ticket_ttl,
                 .download_ttl = config_.download_ttl,
                 .purge_grace_factor = config_.purge_grace_factor}),
      janitor(*store_, *clock_, catalogue, transfers) {
  for (const auto& t : config_.targets) targets.ensure_target(t.storage_type, t.bucket, t.credential_id, t.endpoint);
}

Lakehouse::~Lakehouse() { stop_periodic_sweeps(); }

void Lakehouse::start_periodic_sweeps() {
  if (scheduler_ || config_.janitor_interval.count() == 0) return;
  scheduler_ = std::make_unique<janitor::SweepScheduler>(janitor, config_.janitor_interval);
}

void Lakehouse::stop_periodic_sweeps() { scheduler_.reset(); }

}  // namespace lake::gateway
