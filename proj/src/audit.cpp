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

#include "inspectqual/error.hpp"
#include "inspectqual/timestamp.hpp"

namespace inspectqual::audit {
namespace {

Json body_json(const AuditEntry& e) {
  return Json{{"seq", e.seq},
              {"timestamp", e.timestamp},
              {"actor", e.actor},
              {"action", e.action},
              {"payload_digest", e.payload_digest},
              {"prev_hash", e.prev_hash}};
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

}  // namespace

Json to_json(const AuditEntry& e) {
  Json doc = body_json(e);
  doc["entry_hash"] = e.entry_hash;
  return doc;
}

AuditEntry entry_from_json(const Json& doc) {
  static constexpr const char* kStringFields[] = {
      "timestamp", "actor", "action", "payload_digest", "prev_hash", "entry_hash"};
  if (!doc.is_object() || doc.size() != 7) {
    throw DomainError("audit entry must be an object with exactly 7 fields");
  }
  if (!doc.contains("seq") || !doc.at("seq").is_number_unsigned()) {
    throw DomainError("audit entry: seq must be a non-negative integer");
  }
  for (const char* key : kStringFields) {
    if (!doc.contains(key) || !doc.at(key).is_string()) {
      throw DomainError(std::string("audit entry: missing or non-string field '") +
                        key + "'");
    }
  }
  AuditEntry e;
  e.seq = doc.at("seq").get<std::uint64_t>();
  e.timestamp = doc.at("timestamp").get<std::string>();
  e.actor = doc.at("actor").get<std::string>();
  e.action = doc.at("action").get<std::string>();
  e.payload_digest = doc.at("payload_digest").get<std::string>();
  e.prev_hash = doc.at("prev_hash").get<std::string>();
  e.entry_hash = doc.at("entry_hash").get<std::string>();
  return e;
}

std::string compute_entry_hash(const AuditEntry& e) {
  return sha256_hex(e.prev_hash + canonical_json(body_json(e)));
}

const AuditEntry& AuditLog::append(std::string actor, std::string action,
                                   std::string payload_digest,
                                   std::string timestamp) {
  if (actor.empty()) throw DomainError("audit append: actor is empty");
  if (action.empty()) throw DomainError("audit append: action is empty");
  if (!is_sha256_hex(payload_digest)) {
    throw DomainError("audit append: payload_digest must be 64 lowercase hex "
                      "characters");
  }
  const Instant at = require_rfc3339(timestamp, "audit append timestamp");
  if (!entries_.empty()) {
    const auto last = parse_rfc3339(entries_.back().timestamp);
    if (last && at < *last) {
      throw DomainError("audit append: timestamp " + timestamp +
                        " precedes last entry (" + entries_.back().timestamp + ")");
    }
  }

  AuditEntry e;
  e.seq = entries_.size();
  e.timestamp = std::move(timestamp);
  e.actor = std::move(actor);
  e.action = std::move(action);
  e.payload_digest = std::move(payload_digest);
  e.prev_hash = entries_.empty() ? kGenesisHash : entries_.back().entry_hash;
  e.entry_hash = compute_entry_hash(e);
  entries_.push_back(std::move(e));
  return entries_.back();
}

VerifyResult verify_chain(std::span<const AuditEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const AuditEntry& e = entries[i];
    if (e.seq != i) {
      return {i, "sequence number " + std::to_string(e.seq) + " at position " +
                     std::to_string(i)};
    }
    const std::string& expected_prev =
        i == 0 ? kGenesisHash : entries[i - 1].entry_hash;
    if (e.prev_hash != expected_prev) return {i, "broken link to previous entry"};
    if (compute_entry_hash(e) != e.entry_hash) return {i, "entry hash mismatch"};
  }
  return {};
}

VerifyResult verify_log_text(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<AuditEntry> entries;
  entries.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      entries.push_back(entry_from_json(parse_json(lines[i], "audit log")));
    } catch (const DomainError&) {
      // Anything before this line may still be intact.
      VerifyResult prefix = verify_chain(entries);
      if (!prefix.ok()) return prefix;
      return {i, "line " + std::to_string(i + 1) + " is not a valid audit entry"};
    }
  }
  return verify_chain(entries);
}

std::vector<AuditEntry> parse_log(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<AuditEntry> entries;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      entries.push_back(entry_from_json(parse_json(lines[i], "audit log")));
    } catch (const DomainError& e) {
      throw DomainError("audit log line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return entries;
}

std::string serialize_entry(const AuditEntry& e) { return canonical_json(to_json(e)); }

std::string serialize_log(std::span<const AuditEntry> entries) {
  std::string out;
  for (const auto& e : entries) out += serialize_entry(e);
  return out;
}

std::string store_payload(const std::filesystem::path& dir, std::string_view bytes) {
  const std::string digest = sha256_hex(bytes);
  const auto path = dir / digest;
  if (!std::filesystem::exists(path)) write_file(path, bytes);
  return digest;
}

}  // namespace inspectqual::audit
