#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lake/storage/object_store.hpp"

namespace lake::storage {
namespace {

using governance::Principal;
using lake::testing::Deployment;
using lake::testing::TempDir;

TEST(ObjectPath, RejectsTraversal) {
  EXPECT_TRUE(is_safe_object_path("colA/v1/seq.fasta"));
  for (auto bad : {"", "/abs", "../up", "a/../b", "a//b", "a/./b", "a\\b", "a/", "x\ny"}) {
    EXPECT_FALSE(is_safe_object_path(bad)) << bad;
  }
}

TEST(LocalObjectStore, ContractHolds) {
  TempDir dir;
  LocalObjectStore store(dir.path() / "lab", "http://host:1");
  EXPECT_FALSE(store.exists("c/v1/a.txt"));
  const std::string data = "bytes\0with nul";
  store.write("c/v1/a.txt", as_bytes(data));
  EXPECT_TRUE(store.exists("c/v1/a.txt"));
  EXPECT_EQ(store.size("c/v1/a.txt"), data.size());
  const auto back = store.read("c/v1/a.txt");
  EXPECT_EQ(std::string(back.begin(), back.end()), data);
  store.write("c/v2/b.txt", as_bytes("x"));
  EXPECT_EQ(store.list(), (std::vector<std::string>{"c/v1/a.txt", "c/v2/b.txt"}));
  EXPECT_EQ(store.list("c/v2/"), (std::vector<std::string>{"c/v2/b.txt"}));
  store.remove("c/v1/a.txt");
  EXPECT_FALSE(store.exists("c/v1/a.txt"));
  EXPECT_NO_THROW(store.remove("c/v1/a.txt"));
  EXPECT_FALSE(store.size("c/v1/a.txt"));
  EXPECT_THROW(store.write("../escape", as_bytes("x")), Error);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "escape"));
  EXPECT_EQ(store.upload_url("t1", "c/v1/a.txt"), "http://host:1/raw/t1");
}

TEST(UnconfiguredRemote, FailsWithTransport) {
  UnconfiguredRemoteStore remote(StorageType::kS3Compatible, "lab-archive", Bytes{'k'});
  try {
    remote.exists("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_NE(std::string(e.what()).find("adapter not configured"), std::string::npos);
  }
}

class TargetsTest : public ::testing::Test {
 protected:
  Deployment dep_;
  TargetRegistry& targets() { return dep_.lake().targets; }
};

TEST_F(TargetsTest, RegistrationRules) {
  auto& dm = dep_.data_manager();
  const auto pub = dep_.add_user("pub", Role::kPublisher);
  EXPECT_EQ(targets().list().size(), 1u);
  EXPECT_NO_THROW(targets().register_target(dm, StorageType::kLocal, "bucketX", std::nullopt));
  EXPECT_THROW(targets().register_target(pub, StorageType::kLocal, "bucketY", std::nullopt), Error);
  try {
    targets().register_target(dm, StorageType::kS3Compatible, "lab-archive", std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  const auto cred = dep_.lake().credentials.add(dm, StorageType::kS3Compatible, "lab", "AKIA-topsecret-1");
  targets().register_target(dm, StorageType::kS3Compatible, "lab-archive", cred.credential_id);
  try {
    targets().register_target(dm, StorageType::kS3Compatible, "lab-archive", cred.credential_id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
  const auto gcs = dep_.lake().credentials.add(dm, StorageType::kGcsCompatible, "g", "GCS-topsecret-2");
  EXPECT_THROW(targets().register_target(dm, StorageType::kS3Compatible, "other", gcs.credential_id), Error);
  targets().register_target(dm, StorageType::kGcsCompatible, "gbucket", gcs.credential_id);

  const auto list = targets().list();
  EXPECT_EQ(list.size(), 4u);
  for (const auto& t : list) {
    const auto body = to_public_json(t).dump();
    EXPECT_EQ(body.find("topsecret"), std::string::npos);
    EXPECT_EQ(body.find("ciphertext"), std::string::npos);
  }
  EXPECT_TRUE(targets().find(StorageType::kS3Compatible, "lab-archive"));
  EXPECT_THROW(targets().adapter(StorageType::kLocal, "nope"), Error);
}

class TransfersTest : public ::testing::Test {
 protected:
  void SetUp() override {
    owner_ = dep_.add_user("owner", Role::kPublisher);
    stranger_ = dep_.add_user("stranger", Role::kConsumer);
    col_ = dep_.lake().catalogue.create_collection(owner_, "colA", StorageType::kLocal, "lab");
  }

  catalogue::FileRecord pending(const std::string& name) {
    return dep_.lake().catalogue.register_file(owner_, {name, col_.id, FileCategory::kUnstructured, "lab"},
                                               std::nullopt);
  }

  Deployment dep_;
  Principal owner_, stranger_;
  catalogue::Collection col_;
};

TEST_F(TransfersTest, TicketCarriesConfiguredTtl) {
  const auto ticket = dep_.lake().transfers.issue_upload_ticket(pending("a.txt"));
  EXPECT_EQ(ticket.expires_at - ticket.issued_at, std::chrono::minutes(15));
  EXPECT_EQ(ticket.storage_path, "colA/v1/a.txt");
  EXPECT_NE(ticket.upload_url.find("/raw/" + ticket.ticket_id), std::string::npos);
  EXPECT_EQ(dep_.lake().janitor.queue().size(), 1u);
}

TEST_F(TransfersTest, UploadViaTicketReadsBackExactly) {
  auto& transfers = dep_.lake().transfers;
  const auto record = pending("blob.bin");
  const auto ticket = transfers.issue_upload_ticket(record);
  const auto data = random_bytes(1 << 20);
  transfers.accept_upload(ticket.ticket_id, data);
  auto adapter = dep_.lake().targets.adapter(StorageType::kLocal, "lab");
  EXPECT_EQ(adapter->read(record.storage_path), data);
  EXPECT_TRUE(transfers.object_exists(StorageType::kLocal, "lab", record.storage_path));

  dep_.lake().janitor.commit_upload(record.id, data.size(), std::nullopt);
  const auto grant = transfers.issue_download_url(dep_.lake().catalogue.get_file(record.id), owner_);
  EXPECT_EQ(grant.file_name, "blob.bin");
  EXPECT_EQ(sha256_hex({reinterpret_cast<const char*>(data.data()), data.size()}),
            [&] {
              const auto got = transfers.serve_download(grant.grant_id);
              return sha256_hex({reinterpret_cast<const char*>(got.data()), got.size()});
            }());
  dep_.clock().advance(std::chrono::minutes(15));
  EXPECT_THROW(transfers.serve_download(grant.grant_id), Error);
}

TEST_F(TransfersTest, ExpiredTicketIsRejected) {
  auto& transfers = dep_.lake().transfers;
  const auto record = pending("late.txt");
  const auto ticket = transfers.issue_upload_ticket(record);
  dep_.clock().advance(std::chrono::minutes(15));
  try {
    transfers.accept_upload(ticket.ticket_id, as_bytes("late"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kForbidden);
    EXPECT_NE(std::string(e.what()).find("expired"), std::string::npos);
  }
  EXPECT_FALSE(transfers.object_exists(StorageType::kLocal, "lab", record.storage_path));
  EXPECT_THROW(transfers.accept_upload("unknown", as_bytes("x")), Error);
}

TEST_F(TransfersTest, DownloadNeedsCommittedRecordAndVisa) {
  auto& transfers = dep_.lake().transfers;
  const auto record = pending("d.txt");
  try {
    transfers.issue_download_url(record, owner_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  transfers.accept_upload(transfers.issue_upload_ticket(record).ticket_id, as_bytes("data"));
  const auto committed = dep_.lake().janitor.commit_upload(record.id, std::nullopt, std::nullopt).record;
  try {
    transfers.issue_download_url(committed, stranger_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kForbidden);
  }
  const auto ref = *dep_.lake().catalogue.find_collection(col_.id);
  dep_.lake().access.set_visa_grant(ref, stranger_.user_id, governance::GrantAction::kGrant, owner_);
  EXPECT_NO_THROW(transfers.issue_download_url(committed, stranger_));
  dep_.lake().access.set_visa_grant(ref, stranger_.user_id, governance::GrantAction::kRevoke, owner_);
  EXPECT_THROW(transfers.issue_download_url(committed, stranger_), Error);
  EXPECT_THROW(transfers.issue_upload_ticket(committed), Error);
}

TEST_F(TransfersTest, DeleteIsIdempotent) {
  auto& transfers = dep_.lake().transfers;
  const auto record = pending("x.txt");
  transfers.accept_upload(transfers.issue_upload_ticket(record).ticket_id, as_bytes("x"));
  transfers.delete_object(StorageType::kLocal, "lab", record.storage_path);
  EXPECT_FALSE(transfers.object_exists(StorageType::kLocal, "lab", record.storage_path));
  EXPECT_NO_THROW(transfers.delete_object(StorageType::kLocal, "lab", record.storage_path));
}

}  // namespace
}  // namespace lake::storage
