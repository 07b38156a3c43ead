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

#include "inspectqual/compliance.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <utility>

#include "inspectqual/error.hpp"

namespace inspectqual::compliance {
namespace {

using enum EvidenceKind;

constexpr std::array<std::pair<EvidenceKind, std::string_view>, 7> kKindNames{{
    {kDatasetSheet, "DATASET_SHEET"},
    {kTmvReport, "TMV_REPORT"},
    {kGateDecision, "GATE_DECISION"},
    {kDriftConfig, "DRIFT_CONFIG"},
    {kRetentionManifest, "RETENTION_MANIFEST"},
    {kAuditLog, "AUDIT_LOG"},
    {kLifecyclePolicyDoc, "LIFECYCLE_POLICY_DOC"},
}};

std::vector<RequirementRow> make_rows() {
  std::vector<RequirementRow> rows;
  rows.push_back({"high-risk-classification", "High-Risk Classification",
                  "Treat visual inspection systems as high-risk until harmonised "
                  "standards say otherwise.",
                  "Await clarification in harmonised standards or Annex II of the "
                  "AI Act",
                  {kLifecyclePolicyDoc},
                  std::nullopt});
  rows.push_back({"ai-management-system", "AI-specific Management System (AIMS)",
                  "Extend the existing QMS with an AI policy that defines the "
                  "intended use-cases.",
                  "Track AI management system standards such as ISO/IEC 42001",
                  {kLifecyclePolicyDoc},
                  std::nullopt});
  rows.push_back({"lifecycle-documentation", "Lifecycle Documentation of AI Models",
                  "Trace each model to a dataset specification sheet and a test "
                  "method validation report.",
                  "Guidance on folding model lifecycle records into QMS artefacts",
                  {kDatasetSheet, kTmvReport},
                  std::nullopt});
  rows.push_back({"dataset-governance", "Dataset Governance and Bias Mitigation",
                  "Document dataset curation, the labelling protocol and known "
                  "bias sources in the dataset sheet.",
                  "Guidance on bias metrics, fairness audits and representative "
                  "sampling",
                  {kDatasetSheet},
                  std::nullopt});
  rows.push_back({"explainability", "Explainability of AI Decisions",
                  "Rely on a documented, auditable lifecycle until explainability "
                  "tooling matures.",
                  "Auditable explainability tools",
                  {kDatasetSheet, kAuditLog},
                  std::nullopt});
  rows.push_back({"performance-validation", "Performance Validation (TMV)",
                  "Covered by existing MDR/FDA validation requirements.", "N/A",
                  {kTmvReport},
                  std::nullopt});
  rows.push_back({"post-deployment-monitoring", "Post-Deployment Monitoring",
                  "Monitor input feature drift against a fitted reference.",
                  "Minimum monitoring criteria in future regulation",
                  {kDriftConfig},
                  std::nullopt});
  rows.push_back({"change-management", "Change Management and Retraining",
                  "Static models are covered by existing MDR/FDA change control.",
                  "N/A",
                  {kAuditLog},
                  std::nullopt});
  rows.push_back({"conformity-assessment", "Conformity Assessment of AI Systems",
                  "Assess conformity against the documented lifecycle.",
                  "A defined conformity route, e.g. via notified bodies",
                  {kLifecyclePolicyDoc},
                  "placeholder mapping: no conformity route is defined yet; this "
                  "gap report recorded under the lifecycle policy stands in as "
                  "evidence"});
  rows.push_back({"data-image-retention", "Data and Image Retention",
                  "Keep rejects and a seeded sample of accepts, and log features "
                  "to bound storage cost.",
                  "Guidance on storage scope, duration and traceable artefact "
                  "formats",
                  {kRetentionManifest},
                  std::nullopt});
  return rows;
}

Json kinds_json(const std::vector<EvidenceKind>& kinds) {
  Json out = Json::array();
  for (auto k : kinds) out.push_back(to_string(k));
  return out;
}

void resolve_strict(EvidenceKind kind, const ArtifactRef& ref,
                    const AssessOptions& options) {
  std::filesystem::path path(ref.path);
  if (path.is_relative()) path = options.base_dir / path;
  const std::string name = std::string(to_string(kind)) + " reference '" + ref.path + "'";
  if (!std::filesystem::is_regular_file(path)) {
    throw DomainError("unresolvable " + name + ": file not found");
  }
  if (ref.digest && sha256_hex(read_file(path)) != *ref.digest) {
    throw DomainError("unresolvable " + name + ": digest mismatch");
  }
}

}  // namespace

std::string_view to_string(EvidenceKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "UNKNOWN";
}

std::optional<EvidenceKind> parse_evidence_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

const std::vector<RequirementRow>& builtin_requirements() {
  static const std::vector<RequirementRow> rows = make_rows();
  return rows;
}

Json to_json(const RequirementRow& row) {
  Json doc{{"row_id", row.row_id},
           {"requirement", row.requirement},
           {"interim_recommendation", row.interim_recommendation},
           {"watch_outs", row.watch_outs},
           {"evidence_kinds", kinds_json(row.evidence_kinds)}};
  if (row.note) doc["note"] = *row.note;
  return doc;
}

ProjectState state_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("evidence") ||
      !doc.at("evidence").is_object()) {
    throw DomainError("project state must be an object with an 'evidence' object");
  }
  ProjectState state;
  for (const auto& [key, refs] : doc.at("evidence").items()) {
    const auto kind = parse_evidence_kind(key);
    if (!kind) throw DomainError("project state: unknown evidence kind '" + key + "'");
    if (!refs.is_array()) {
      throw DomainError("project state: evidence '" + key + "' must be an array");
    }
    auto& out = state.evidence[*kind];
    for (const Json& ref : refs) {
      ArtifactRef a;
      if (ref.is_string()) {
        a.path = ref.get<std::string>();
      } else if (ref.is_object() && ref.contains("path") && ref.at("path").is_string()) {
        a.path = ref.at("path").get<std::string>();
        if (ref.contains("digest") && !ref.at("digest").is_null()) {
          if (!ref.at("digest").is_string() ||
              !is_sha256_hex(ref.at("digest").get<std::string>())) {
            throw DomainError("project state: bad digest for '" + a.path + "'");
          }
          a.digest = ref.at("digest").get<std::string>();
        }
      } else {
        throw DomainError("project state: evidence '" + key +
                          "' entries must be paths or {path, digest} objects");
      }
      out.push_back(std::move(a));
    }
  }
  return state;
}

Json to_json(const ProjectState& state) {
  Json evidence = Json::object();
  for (const auto& [kind, refs] : state.evidence) {
    Json list = Json::array();
    for (const auto& r : refs) {
      Json item{{"path", r.path}};
      if (r.digest) item["digest"] = *r.digest;
      list.push_back(std::move(item));
    }
    evidence[std::string(to_string(kind))] = std::move(list);
  }
  return Json{{"evidence", std::move(evidence)}};
}

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kSatisfied:
      return "satisfied";
    case RowStatus::kPartiallySatisfied:
      return "partially-satisfied";
    case RowStatus::kMissing:
      return "missing";
  }
  return "missing";
}

bool GapReport::all_satisfied() const {
  return std::all_of(rows.begin(), rows.end(), [](const RowAssessment& r) {
    return r.status == RowStatus::kSatisfied;
  });
}

GapReport assess(const ProjectState& state, const AssessOptions& options) {
  if (options.strict) {
    for (const auto& [kind, refs] : state.evidence) {
      for (const auto& ref : refs) resolve_strict(kind, ref, options);
    }
  }
  const auto has = [&state](EvidenceKind k) {
    auto it = state.evidence.find(k);
    return it != state.evidence.end() && !it->second.empty();
  };

  GapReport report;
  for (const auto& row : builtin_requirements()) {
    RowAssessment a;
    a.row_id = row.row_id;
    a.requirement = row.requirement;
    a.note = row.note;
    for (auto k : row.evidence_kinds) (has(k) ? a.present : a.missing).push_back(k);
    if (a.missing.empty()) {
      a.status = RowStatus::kSatisfied;
    } else if (a.present.empty()) {
      a.status = RowStatus::kMissing;
    } else {
      a.status = RowStatus::kPartiallySatisfied;
    }
    report.rows.push_back(std::move(a));
  }
  return report;
}

Json to_json(const GapReport& report) {
  Json rows = Json::array();
  std::size_t satisfied = 0;
  std::size_t partial = 0;
  std::size_t missing = 0;
  for (const auto& r : report.rows) {
    Json row{{"row_id", r.row_id},
             {"requirement", r.requirement},
             {"status", to_string(r.status)},
             {"present", kinds_json(r.present)},
             {"missing", kinds_json(r.missing)}};
    if (r.note) row["note"] = *r.note;
    rows.push_back(std::move(row));
    switch (r.status) {
      case RowStatus::kSatisfied:
        ++satisfied;
        break;
      case RowStatus::kPartiallySatisfied:
        ++partial;
        break;
      case RowStatus::kMissing:
        ++missing;
        break;
    }
  }
  return Json{{"rows", std::move(rows)},
              {"summary",
               {{"satisfied", satisfied},
                {"partially_satisfied", partial},
                {"missing", missing}}},
              {"gaps_found", !report.all_satisfied()}};
}

std::string render_table(const GapReport& report) {
  std::size_t width = std::string_view("REQUIREMENT").size();
  for (const auto& r : report.rows) width = std::max(width, r.requirement.size());

  std::string out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-*s  %-19s  %s\n", static_cast<int>(width),
                "REQUIREMENT", "STATUS", "MISSING EVIDENCE");
  out += line;
  for (const auto& r : report.rows) {
    std::string missing;
    for (auto k : r.missing) {
      if (!missing.empty()) missing += ", ";
      missing += to_string(k);
    }
    if (missing.empty()) missing = "-";
    std::snprintf(line, sizeof(line), "%-*s  %-19s  %s%s\n",
                  static_cast<int>(width), r.requirement.c_str(),
                  std::string(to_string(r.status)).c_str(), missing.c_str(),
                  r.note ? "  (placeholder mapping)" : "");
    out += line;
  }
  return out;
}

}  // namespace inspectqual::compliance
