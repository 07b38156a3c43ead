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

// Dataset specification sheets: a versioned, digestible description of an
// inspection dataset (composition, acquisition setup, labelling, bias
// mitigations) plus the sample-composition rule applied before validation.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inspectqual/canonical.hpp"

namespace inspectqual::manifest {

struct BiasEntry {
  std::string source;
  std::string mitigation;

  friend bool operator==(const BiasEntry&, const BiasEntry&) = default;
};

struct Labelling {
  std::vector<std::string> label_types;
  std::string process;
  std::string annotator_instructions_ref;
  std::optional<std::map<std::string, double>> inter_annotator_stats;

  friend bool operator==(const Labelling&, const Labelling&) = default;
};

struct DatasetSpecSheet {
  std::string dataset_id;
  std::int64_t version = 0;
  std::string storage_location;
  std::map<std::string, std::uint64_t> class_distribution;
  // Keys of class_distribution that count as defective units.
  std::vector<std::string> defect_classes;
  std::uint64_t total_samples = 0;
  std::map<std::string, std::string> acquisition;
  std::string defect_generation;
  bool artificial_defects_used = false;
  Labelling labelling;
  std::vector<BiasEntry> bias;
  std::string created_at;
  std::optional<std::string> content_digest;

  friend bool operator==(const DatasetSpecSheet&,
                         const DatasetSpecSheet&) = default;
};

/// Stable violation codes.
namespace code {
inline constexpr const char* kMissingId = "MISSING_ID";
inline constexpr const char* kInvalidVersion = "INVALID_VERSION";
inline constexpr const char* kMissingStorageLocation = "MISSING_STORAGE_LOCATION";
inline constexpr const char* kEmptyClassDistribution = "EMPTY_CLASS_DISTRIBUTION";
inline constexpr const char* kCountMismatch = "COUNT_MISMATCH";
inline constexpr const char* kUnknownDefectClass = "UNKNOWN_DEFECT_CLASS";
inline constexpr const char* kNoDefectClass = "NO_DEFECT_CLASS";
inline constexpr const char* kNoNondefectClass = "NO_NONDEFECT_CLASS";
inline constexpr const char* kMissingAcquisition = "MISSING_ACQUISITION";
inline constexpr const char* kMissingDefectGeneration = "MISSING_DEFECT_GENERATION";
inline constexpr const char* kMissingLabelTypes = "MISSING_LABEL_TYPES";
inline constexpr const char* kMissingLabellingProcess = "MISSING_LABELLING_PROCESS";
inline constexpr const char* kMissingAnnotatorInstructions =
    "MISSING_ANNOTATOR_INSTRUCTIONS";
inline constexpr const char* kMissingBias = "MISSING_BIAS";
inline constexpr const char* kIncompleteBiasEntry = "INCOMPLETE_BIAS_ENTRY";
inline constexpr const char* kMissingCreatedAt = "MISSING_CREATED_AT";
inline constexpr const char* kInvalidCreatedAt = "INVALID_CREATED_AT";
inline constexpr const char* kDigestMismatch = "DIGEST_MISMATCH";
}  // namespace code

struct Violation {
  std::string code;
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Empty result means the sheet is valid.
std::vector<Violation> validate_sheet(const DatasetSpecSheet& sheet);

/// Parses a sheet document. Missing fields are left empty so that
/// validate_sheet can report them; wrong types and unknown keys raise
/// DomainError.
DatasetSpecSheet sheet_from_json(const Json& doc);
Json to_json(const DatasetSpecSheet& sheet);

/// SHA-256 over the canonical serialization, content_digest excluded.
/// Throws DomainError when the sheet is invalid.
std::string canonical_digest(const DatasetSpecSheet& sheet);

/// Returns a copy with content_digest filled in.
DatasetSpecSheet seal(DatasetSpecSheet sheet);

enum class ChangeKind { kModified, kAdded, kRemoved };

struct Change {
  std::string field_path;  // e.g. "total_samples", "acquisition.camera", "bias[2]"
  ChangeKind kind = ChangeKind::kModified;
  Json old_value;  // null for kAdded
  Json new_value;  // null for kRemoved
};

/// Leaf-level differences between the canonical forms of two sheets.
/// Array insertions and removals are aligned by longest common subsequence,
/// so one inserted bias entry is reported as one kAdded change.
std::vector<Change> diff_sheets(const DatasetSpecSheet& a,
                                const DatasetSpecSheet& b);

Json to_json(const Change& c);

struct CompositionPolicy {
  double min_defect_fraction = 0.25;
  double max_defect_fraction = 0.50;
  bool require_marginal_cases = true;
};

/// Throws DomainError unless 0 < min <= max < 1.
void validate_policy(const CompositionPolicy& policy);
CompositionPolicy policy_from_json(const Json& doc);
Json to_json(const CompositionPolicy& policy);

struct CompositionVerdict {
  bool pass = false;
  double defect_fraction = 0.0;
  bool marginal_cases_declared = false;
  std::vector<std::string> reasons;
};

Json to_json(const CompositionVerdict& v);

/// True when some label type names a marginal-case class (contains
/// "marginal", case-insensitive).
bool declares_marginal_cases(const Labelling& labelling);

/// Bounds are inclusive. Throws DomainError when total == 0 or
/// defect_count > total.
CompositionVerdict evaluate_composition(std::uint64_t defect_count,
                                        std::uint64_t total,
                                        bool marginal_cases_declared,
                                        const CompositionPolicy& policy);

/// Composition of a valid sheet. Throws DomainError for invalid sheets and
/// zero totals.
CompositionVerdict check_composition(const DatasetSpecSheet& sheet,
                                     const CompositionPolicy& policy);

std::uint64_t defect_count(const DatasetSpecSheet& sheet);

}  // namespace inspectqual::manifest
