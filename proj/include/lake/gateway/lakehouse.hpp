#pragma once

#include <memory>
#include <optional>
#include <string>

#include "lake/catalogue/catalogue.hpp"
#include "lake/common/clock.hpp"
#include "lake/gateway/config.hpp"
#include "lake/governance/access_requests.hpp"
#include "lake/governance/credentials.hpp"
#include "lake/governance/users.hpp"
#include "lake/governance/vault.hpp"
#include "lake/governance/visas.hpp"
#include "lake/janitor/janitor.hpp"
#include "lake/storage/targets.hpp"
#include "lake/storage/transfers.hpp"
#include "lake/store/document_store.hpp"

namespace lake::gateway {

struct DeploymentOptions {
  /// Overrides LAKEHOUSE_SECRET_KEY.
  std::optional<std::string> secret_key;
  bool dev_insecure = false;
  /// Defaults to the system clock.
  std::shared_ptr<const Clock> clock;
};

/// One deployment: the store, every service, wired in dependency order.
class Lakehouse {
 public:
  Lakehouse(Config config, DeploymentOptions options);
  ~Lakehouse();
  Lakehouse(const Lakehouse&) = delete;
  Lakehouse& operator=(const Lakehouse&) = delete;

  /// Interval sweeps per config; no-op when the interval is 0.
  void start_periodic_sweeps();
  void stop_periodic_sweeps();

  const Config& config() const { return config_; }
  const Clock& clock() const { return *clock_; }
  store::DocumentStore& store() { return *store_; }

 private:
  Config config_;
  std::shared_ptr<const Clock> clock_;
  std::unique_ptr<store::DocumentStore> store_;

 public:
  governance::Vault vault;
  governance::UserService users;
  governance::InternalVisaBroker visas;
  governance::AccessControl access;
  governance::CredentialService credentials;
  storage::TargetRegistry targets;
  catalogue::Catalogue catalogue;
  governance::AccessRequestService requests;
  storage::TransferService transfers;
  janitor::Janitor janitor;

 private:
  std::unique_ptr<janitor::SweepScheduler> scheduler_;
};

}  // namespace lake::gateway
