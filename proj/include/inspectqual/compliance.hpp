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

// EU AI Act requirement rows for DL visual inspection of medical devices,
// each mapped to the artifact kinds this toolkit produces, and an
// evidence-presence gap assessment against them. Status reflects only
// whether evidence exists, never whether its content is adequate.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inspectqual/canonical.hpp"

namespace inspectqual::compliance {

enum class EvidenceKind {
  kDatasetSheet,
  kTmvReport,
  kGateDecision,
  kDriftConfig,
  kRetentionManifest,
  kAuditLog,
  kLifecyclePolicyDoc,
};

std::string_view to_string(EvidenceKind k);
std::optional<EvidenceKind> parse_evidence_kind(std::string_view s);

struct RequirementRow {
  std::string row_id;
  std::string requirement;
  std::string interim_recommendation;
  std::string watch_outs;
  std::vector<EvidenceKind> evidence_kinds;
  // Set when the evidence mapping stands in for an undefined assessment route.
  std::optional<std::string> note;
};

/// The ten built-in requirement rows, in table order.
const std::vector<RequirementRow>& builtin_requirements();

Json to_json(const RequirementRow& row);

struct ArtifactRef {
  std::string path;
  std::optional<std::string> digest;  // SHA-256 of the file bytes
};

struct ProjectState {
  std::map<EvidenceKind, std::vector<ArtifactRef>> evidence;
};

/// {"evidence": {"DATASET_SHEET": [{"path": "...", "digest": "..."}], ...}}.
/// Unknown kinds raise DomainError.
ProjectState state_from_json(const Json& doc);
Json to_json(const ProjectState& state);

enum class RowStatus { kSatisfied, kPartiallySatisfied, kMissing };

std::string_view to_string(RowStatus s);

struct RowAssessment {
  std::string row_id;
  std::string requirement;
  RowStatus status = RowStatus::kMissing;
  std::vector<EvidenceKind> present;
  std::vector<EvidenceKind> missing;
  std::optional<std::string> note;
};

struct GapReport {
  std::vector<RowAssessment> rows;

  bool all_satisfied() const;
};

struct AssessOptions {
  bool strict = false;
  // Relative artifact paths resolve against this directory in strict mode.
  std::filesystem::path base_dir;
};

/// Strict mode: every reference must name an existing file and, when a
/// digest is given, match it; otherwise DomainError naming the reference.
GapReport assess(const ProjectState& state, const AssessOptions& options = {});

Json to_json(const GapReport& report);

/// Fixed-width plain-text table.
std::string render_table(const GapReport& report);

}  // namespace inspectqual::compliance
