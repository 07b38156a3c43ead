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

// Append-only, hash-chained quality record log.
//
//   entry_hash = SHA-256(prev_hash || canonical(entry without entry_hash))
//
// where prev_hash is the previous entry's hash (64 zeros for the first
// entry) and canonical() is the sorted-key compact JSON form with trailing
// LF. Payloads are referenced by digest and kept in a content-addressed
// directory next to the log.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inspectqual/canonical.hpp"

namespace inspectqual::audit {

inline const std::string kGenesisHash(64, '0');

struct AuditEntry {
  std::uint64_t seq = 0;
  std::string timestamp;
  std::string actor;
  std::string action;
  std::string payload_digest;
  std::string prev_hash;
  std::string entry_hash;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

Json to_json(const AuditEntry& e);

/// Strict: exactly the seven fields with the right types.
AuditEntry entry_from_json(const Json& doc);

std::string compute_entry_hash(const AuditEntry& e);

class AuditLog {
 public:
  AuditLog() = default;

  /// Wraps existing entries without checking them; call verify_chain first
  /// when they come from outside.
  explicit AuditLog(std::vector<AuditEntry> entries)
      : entries_(std::move(entries)) {}

  /// Throws DomainError on an empty actor/action, a malformed payload
  /// digest, a malformed timestamp, or a timestamp earlier than the last
  /// entry's. Equal timestamps are allowed.
  const AuditEntry& append(std::string actor, std::string action,
                           std::string payload_digest, std::string timestamp);

  const std::vector<AuditEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<AuditEntry> entries_;
};

struct VerifyResult {
  std::optional<std::size_t> bad_index;  // empty = chain intact
  std::string reason;

  bool ok() const { return !bad_index.has_value(); }
};

/// First index whose seq, linkage, or recomputed hash is wrong.
VerifyResult verify_chain(std::span<const AuditEntry> entries);

/// JSON lines log text. Lines that do not parse as entries count as bad at
/// their index.
VerifyResult verify_log_text(std::string_view text);

/// Throws DomainError naming the line of the first unparseable entry.
std::vector<AuditEntry> parse_log(std::string_view text);

std::string serialize_entry(const AuditEntry& e);
std::string serialize_log(std::span<const AuditEntry> entries);

/// Copies `bytes` into `dir`/<sha256> and returns the digest. Existing
/// content is left untouched.
std::string store_payload(const std::filesystem::path& dir, std::string_view bytes);

}  // namespace inspectqual::audit
