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

// Canonical JSON and SHA-256 helpers shared by every record type that carries
// a digest (dataset sheets, TMV reports, reference models, manifests, audit
// entries).
//
// Canonical form: object keys sorted bytewise at every level, no whitespace
// between tokens, numbers in shortest round-trip form, terminated by one LF.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace inspectqual {

using Json = nlohmann::json;

/// Canonical bytes of `doc`, including the trailing LF.
std::string canonical_json(const Json& doc);

/// Lowercase hex SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of canonical_json(doc).
std::string canonical_digest(const Json& doc);

/// SHA-256 of canonical_json(doc) with the top-level `field` removed. Used for
/// self-describing documents whose digest lives inside them.
std::string digest_without(Json doc, std::string_view field);

/// True iff `s` is 64 lowercase hex characters.
bool is_sha256_hex(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

/// Parses a JSON document; malformed input raises DomainError naming `what`.
Json parse_json(std::string_view text, std::string_view what);

/// One JSON value per non-blank line. Errors name the 1-based line number.
std::vector<Json> parse_json_lines(std::string_view text, std::string_view what);

}  // namespace inspectqual
