// Copyright 2026 The InspectQual Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "inspectqual/audit.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "inspectqual/error.hpp"
#include "inspectqual/rng.hpp"
#include "inspectqual/timestamp.hpp"

namespace inspectqual::audit {
namespace {

AuditLog build_log(std::size_t n) {
  AuditLog log;
  for (std::size_t i = 0; i < n; ++i) {
    log.append("operator-" + std::to_string(i % 3), i % 2 ? "TMV_RUN" : "SHEET_SEAL",
               sha256_hex("payload " + std::to_string(i)),
               format_rfc3339(1767225600 + static_cast<std::int64_t>(i / 2) * 30));
  }
  return log;
}

TEST(Append, Genesis) {
  AuditLog log;
  const auto& e = log.append("qa", "SHEET_SEAL", sha256_hex("x"), "2026-01-01T00:00:00Z");
  EXPECT_EQ(e.seq, 0u);
  EXPECT_EQ(e.prev_hash, std::string(64, '0'));
  EXPECT_EQ(e.entry_hash, compute_entry_hash(e));
}

TEST(Append, Chains) {
  AuditLog log;
  log.append("qa", "A", sha256_hex("x"), "2026-01-01T00:00:00Z");
  log.append("qa", "B", sha256_hex("y"), "2026-01-01T00:00:00Z");
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.entries()[1].seq, 1u);
  EXPECT_EQ(log.entries()[1].prev_hash, log.entries()[0].entry_hash);
}

TEST(Append, Errors) {
  AuditLog log;
  log.append("qa", "A", sha256_hex("x"), "2026-01-02T00:00:00Z");
  EXPECT_THROW(log.append("qa", "B", sha256_hex("y"), "2026-01-01T23:59:59Z"), DomainError);
  EXPECT_THROW(log.append("", "B", sha256_hex("y"), "2026-01-03T00:00:00Z"), DomainError);
  EXPECT_THROW(log.append("qa", "", sha256_hex("y"), "2026-01-03T00:00:00Z"), DomainError);
  EXPECT_THROW(log.append("qa", "B", "abc", "2026-01-03T00:00:00Z"), DomainError);
  EXPECT_THROW(log.append("qa", "B", sha256_hex("y"), "soon"), DomainError);
  // An offset spelling of a later instant is accepted.
  EXPECT_NO_THROW(log.append("qa", "B", sha256_hex("y"), "2026-01-02T01:30:00+01:00"));
  EXPECT_EQ(log.size(), 2u);
}

TEST(Verify, UntamperedAndEmpty) {
  EXPECT_TRUE(verify_chain(build_log(100).entries()).ok());
  EXPECT_TRUE(verify_chain(std::vector<AuditEntry>{}).ok());
  EXPECT_TRUE(verify_log_text("").ok());
}

TEST(Verify, FlippedPayloadDigestByte) {
  auto entries = build_log(100).entries();
  auto& d = entries[42].payload_digest;
  d[5] = d[5] == 'a' ? 'b' : 'a';
  const auto r = verify_chain(entries);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.bad_index, 42u);
}

TEST(Verify, DeletedEntry) {
  auto entries = build_log(100).entries();
  entries.erase(entries.begin() + 10);
  const auto r = verify_chain(entries);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.bad_index, 10u);
}

TEST(Verify, TextRoundTripAndGarbage) {
  const auto log = build_log(20);
  const auto text = serialize_log(log.entries());
  EXPECT_EQ(parse_log(text), log.entries());
  EXPECT_TRUE(verify_log_text(text).ok());

  std::string broken = text;
  const auto line3 = [&] {
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) pos = broken.find('\n', pos) + 1;
    return pos;
  }();
  broken[line3] = '[';
  const auto r = verify_log_text(broken);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.bad_index, 3u);
  EXPECT_THROW(parse_log(broken), DomainError);
}

TEST(Entry, StrictJson) {
  const auto e = build_log(1).entries()[0];
  EXPECT_EQ(entry_from_json(to_json(e)), e);
  Json extra = to_json(e);
  extra["note"] = "x";
  EXPECT_THROW(entry_from_json(extra), DomainError);
  Json wrong = to_json(e);
  wrong["seq"] = "0";
  EXPECT_THROW(entry_from_json(wrong), DomainError);
}

TEST(StorePayload, ContentAddressed) {
  const auto dir = std::filesystem::temp_directory_path() / "inspectqual_audit_payloads";
  std::filesystem::remove_all(dir);
  const auto d = store_payload(dir, "hello");
  EXPECT_EQ(d, sha256_hex("hello"));
  EXPECT_EQ(read_file(dir / d), "hello");
  EXPECT_EQ(store_payload(dir, "hello"), d);
  std::filesystem::remove_all(dir);
}

TEST(AuditProperty, EveryFieldMutationIsCaughtAtItsIndex) {
  const auto log = build_log(40);
  Xoshiro256StarStar rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    auto entries = log.entries();
    const std::size_t i = rng() % entries.size();
    auto& e = entries[i];
    switch (rng() % 7) {
      case 0: e.seq += 1 + rng() % 5; break;
      case 1: e.timestamp[3] = e.timestamp[3] == '6' ? '7' : '6'; break;
      case 2: e.actor += "x"; break;
      case 3: e.action = "FORGED"; break;
      case 4: e.payload_digest = sha256_hex(std::to_string(rng())); break;
      case 5: e.prev_hash[rng() % 64] ^= 0x01; break;
      default: e.entry_hash[rng() % 64] ^= 0x01; break;
    }
    const auto r = verify_chain(entries);
    ASSERT_FALSE(r.ok());
    EXPECT_LE(*r.bad_index, i + 1);
  }
}

TEST(AuditProperty, AppendKeepsChainAndHistory) {
  auto log = build_log(30);
  const auto before = log.entries();
  log.append("qa", "EXTRA", sha256_hex("z"), "2026-12-31T00:00:00Z");
  EXPECT_TRUE(verify_chain(log.entries()).ok());
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_EQ(log.entries()[i], before[i]);
  }
}

}  // namespace
}  // namespace inspectqual::audit
