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

#include "inspectqual/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "inspectqual/error.hpp"
#include "inspectqual/timestamp.hpp"

namespace inspectqual::manifest {
namespace {

const std::set<std::string> kSheetKeys = {
    "dataset_id",      "version",          "storage_location",
    "class_distribution", "defect_classes", "total_samples",
    "acquisition",     "defect_generation", "artificial_defects_used",
    "labelling",       "bias",             "created_at",
    "content_digest"};

const std::set<std::string> kLabellingKeys = {
    "label_types", "process", "annotator_instructions_ref",
    "inter_annotator_stats"};

void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw DomainError(where + ": unknown field '" + key + "'");
    }
  }
}

template <typename T>
void read_field(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw DomainError(std::string("dataset sheet: field '") + key +
                      "' has the wrong type");
  }
}

// nlohmann converts negative integers to unsigned silently; counts must be
// checked before conversion.
void require_unsigned(const Json& value, const std::string& field) {
  if (!value.is_number_unsigned()) {
    throw DomainError("dataset sheet: field '" + field +
                      "' must be a non-negative integer");
  }
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void diff_values(const std::string& path, const Json& a, const Json& b,
                 std::vector<Change>& out);

void diff_arrays(const std::string& path, const Json& a, const Json& b,
                 std::vector<Change>& out) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..].
  std::vector<std::vector<std::size_t>> lcs(n + 1,
                                            std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<std::size_t> gap_a;
  std::vector<std::size_t> gap_b;
  const auto flush = [&] {
    const std::size_t paired = std::min(gap_a.size(), gap_b.size());
    for (std::size_t k = 0; k < paired; ++k) {
      diff_values(index_path(path, gap_b[k]), a[gap_a[k]], b[gap_b[k]], out);
    }
    for (std::size_t k = paired; k < gap_a.size(); ++k) {
      out.push_back({index_path(path, gap_a[k]), ChangeKind::kRemoved,
                     a[gap_a[k]], nullptr});
    }
    for (std::size_t k = paired; k < gap_b.size(); ++k) {
      out.push_back({index_path(path, gap_b[k]), ChangeKind::kAdded, nullptr,
                     b[gap_b[k]]});
    }
    gap_a.clear();
    gap_b.clear();
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      flush();
      ++i;
      ++j;
    } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
      gap_b.push_back(j++);
    } else {
      gap_a.push_back(i++);
    }
  }
  flush();
}

void diff_values(const std::string& path, const Json& a, const Json& b,
                 std::vector<Change>& out) {
  if (a == b) return;
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (const auto& [k, _] : a.items()) keys.insert(k);
    for (const auto& [k, _] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      const std::string sub = join_path(path, k);
      if (!b.contains(k)) {
        out.push_back({sub, ChangeKind::kRemoved, a.at(k), nullptr});
      } else if (!a.contains(k)) {
        out.push_back({sub, ChangeKind::kAdded, nullptr, b.at(k)});
      } else {
        diff_values(sub, a.at(k), b.at(k), out);
      }
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    diff_arrays(path, a, b, out);
    return;
  }
  out.push_back({path, ChangeKind::kModified, a, b});
}

Json canonical_body(const DatasetSpecSheet& sheet) {
  Json doc = to_json(sheet);
  doc.erase("content_digest");
  return doc;
}

}  // namespace

std::vector<Violation> validate_sheet(const DatasetSpecSheet& sheet) {
  std::vector<Violation> out;
  const auto add = [&out](const char* code, std::string field,
                          std::string message) {
    out.push_back({code, std::move(field), std::move(message)});
  };

  if (blank(sheet.dataset_id)) {
    add(code::kMissingId, "dataset_id", "dataset_id is empty");
  }
  if (sheet.version < 1) {
    add(code::kInvalidVersion, "version",
        "version must be >= 1, got " + std::to_string(sheet.version));
  }
  if (blank(sheet.storage_location)) {
    add(code::kMissingStorageLocation, "storage_location",
        "storage_location is empty");
  }

  if (sheet.class_distribution.empty()) {
    add(code::kEmptyClassDistribution, "class_distribution",
        "no classes declared");
  } else {
    std::uint64_t sum = 0;
    for (const auto& [_, count] : sheet.class_distribution) sum += count;
    if (sum != sheet.total_samples) {
      add(code::kCountMismatch, "total_samples",
          "class counts sum to " + std::to_string(sum) + " but total_samples is " +
              std::to_string(sheet.total_samples));
    }
    std::set<std::string> defect_set;
    for (std::size_t i = 0; i < sheet.defect_classes.size(); ++i) {
      const auto& label = sheet.defect_classes[i];
      if (!sheet.class_distribution.contains(label)) {
        add(code::kUnknownDefectClass, index_path("defect_classes", i),
            "defect class '" + label + "' is not in class_distribution");
      } else {
        defect_set.insert(label);
      }
    }
    if (defect_set.empty()) {
      add(code::kNoDefectClass, "defect_classes",
          "no class is designated as a defect class");
    }
    if (defect_set.size() == sheet.class_distribution.size()) {
      add(code::kNoNondefectClass, "defect_classes",
          "every class is designated as a defect class");
    }
  }

  if (sheet.acquisition.empty()) {
    add(code::kMissingAcquisition, "acquisition",
        "image acquisition parameters are empty");
  }
  if (blank(sheet.defect_generation)) {
    add(code::kMissingDefectGeneration, "defect_generation",
        "defect generation or sampling methodology is empty");
  }
  if (sheet.labelling.label_types.empty()) {
    add(code::kMissingLabelTypes, "labelling.label_types",
        "no label types declared");
  }
  if (blank(sheet.labelling.process)) {
    add(code::kMissingLabellingProcess, "labelling.process",
        "labelling process is empty");
  }
  if (blank(sheet.labelling.annotator_instructions_ref)) {
    add(code::kMissingAnnotatorInstructions,
        "labelling.annotator_instructions_ref",
        "annotator instructions reference is empty");
  }
  if (sheet.bias.empty()) {
    add(code::kMissingBias, "bias", "no bias sources recorded");
  }
  for (std::size_t i = 0; i < sheet.bias.size(); ++i) {
    if (blank(sheet.bias[i].source) || blank(sheet.bias[i].mitigation)) {
      add(code::kIncompleteBiasEntry, index_path("bias", i),
          "bias entry needs both a source and a mitigation");
    }
  }
  if (blank(sheet.created_at)) {
    add(code::kMissingCreatedAt, "created_at", "created_at is empty");
  } else if (!parse_rfc3339(sheet.created_at)) {
    add(code::kInvalidCreatedAt, "created_at",
        "created_at is not an RFC 3339 timestamp");
  }

  if (sheet.content_digest) {
    const std::string actual = digest_without(to_json(sheet), "content_digest");
    if (*sheet.content_digest != actual) {
      add(code::kDigestMismatch, "content_digest",
          "content_digest does not match sheet contents (expected " + actual +
              ")");
    }
  }
  return out;
}

DatasetSpecSheet sheet_from_json(const Json& doc) {
  if (!doc.is_object()) throw DomainError("dataset sheet must be a JSON object");
  reject_unknown_keys(doc, kSheetKeys, "dataset sheet");

  if (doc.contains("total_samples")) {
    require_unsigned(doc.at("total_samples"), "total_samples");
  }
  if (doc.contains("class_distribution") &&
      doc.at("class_distribution").is_object()) {
    for (const auto& [label, count] : doc.at("class_distribution").items()) {
      require_unsigned(count, "class_distribution." + label);
    }
  }

  DatasetSpecSheet s;
  read_field(doc, "dataset_id", s.dataset_id);
  read_field(doc, "version", s.version);
  read_field(doc, "storage_location", s.storage_location);
  read_field(doc, "class_distribution", s.class_distribution);
  read_field(doc, "defect_classes", s.defect_classes);
  read_field(doc, "total_samples", s.total_samples);
  read_field(doc, "acquisition", s.acquisition);
  read_field(doc, "defect_generation", s.defect_generation);
  read_field(doc, "artificial_defects_used", s.artificial_defects_used);
  read_field(doc, "created_at", s.created_at);
  if (doc.contains("content_digest") && !doc.at("content_digest").is_null()) {
    std::string digest;
    read_field(doc, "content_digest", digest);
    s.content_digest = digest;
  }

  if (doc.contains("labelling")) {
    const Json& lab = doc.at("labelling");
    if (!lab.is_object()) throw DomainError("dataset sheet: labelling must be an object");
    reject_unknown_keys(lab, kLabellingKeys, "dataset sheet labelling");
    read_field(lab, "label_types", s.labelling.label_types);
    read_field(lab, "process", s.labelling.process);
    read_field(lab, "annotator_instructions_ref",
               s.labelling.annotator_instructions_ref);
    if (lab.contains("inter_annotator_stats") &&
        !lab.at("inter_annotator_stats").is_null()) {
      std::map<std::string, double> stats;
      read_field(lab, "inter_annotator_stats", stats);
      s.labelling.inter_annotator_stats = std::move(stats);
    }
  }

  if (doc.contains("bias")) {
    const Json& bias = doc.at("bias");
    if (!bias.is_array()) throw DomainError("dataset sheet: bias must be an array");
    for (const Json& entry : bias) {
      if (!entry.is_object()) {
        throw DomainError("dataset sheet: bias entries must be objects");
      }
      reject_unknown_keys(entry, {"source", "mitigation"}, "dataset sheet bias");
      BiasEntry b;
      read_field(entry, "source", b.source);
      read_field(entry, "mitigation", b.mitigation);
      s.bias.push_back(std::move(b));
    }
  }
  return s;
}

Json to_json(const DatasetSpecSheet& s) {
  Json labelling{{"label_types", s.labelling.label_types},
                 {"process", s.labelling.process},
                 {"annotator_instructions_ref",
                  s.labelling.annotator_instructions_ref}};
  if (s.labelling.inter_annotator_stats) {
    labelling["inter_annotator_stats"] = *s.labelling.inter_annotator_stats;
  }
  Json bias = Json::array();
  for (const auto& b : s.bias) {
    bias.push_back({{"source", b.source}, {"mitigation", b.mitigation}});
  }
  Json doc{{"dataset_id", s.dataset_id},
           {"version", s.version},
           {"storage_location", s.storage_location},
           {"class_distribution", s.class_distribution},
           {"defect_classes", s.defect_classes},
           {"total_samples", s.total_samples},
           {"acquisition", s.acquisition},
           {"defect_generation", s.defect_generation},
           {"artificial_defects_used", s.artificial_defects_used},
           {"labelling", std::move(labelling)},
           {"bias", std::move(bias)},
           {"created_at", s.created_at}};
  if (s.content_digest) doc["content_digest"] = *s.content_digest;
  return doc;
}

std::string canonical_digest(const DatasetSpecSheet& sheet) {
  const auto violations = validate_sheet(sheet);
  if (!violations.empty()) {
    std::string codes;
    for (const auto& v : violations) {
      if (!codes.empty()) codes += ", ";
      codes += v.code;
    }
    throw DomainError("cannot digest an invalid dataset sheet: " + codes);
  }
  return inspectqual::canonical_digest(canonical_body(sheet));
}

DatasetSpecSheet seal(DatasetSpecSheet sheet) {
  sheet.content_digest.reset();
  sheet.content_digest = canonical_digest(sheet);
  return sheet;
}

std::vector<Change> diff_sheets(const DatasetSpecSheet& a,
                                const DatasetSpecSheet& b) {
  std::vector<Change> out;
  diff_values("", canonical_body(a), canonical_body(b), out);
  return out;
}

Json to_json(const Change& c) {
  const char* kind = c.kind == ChangeKind::kAdded     ? "added"
                     : c.kind == ChangeKind::kRemoved ? "removed"
                                                      : "modified";
  return Json{{"field_path", c.field_path},
              {"kind", kind},
              {"old", c.old_value},
              {"new", c.new_value}};
}

void validate_policy(const CompositionPolicy& p) {
  if (!(p.min_defect_fraction > 0.0 &&
        p.min_defect_fraction <= p.max_defect_fraction &&
        p.max_defect_fraction < 1.0)) {
    throw DomainError(
        "composition policy requires 0 < min_defect_fraction <= "
        "max_defect_fraction < 1");
  }
}

CompositionPolicy policy_from_json(const Json& doc) {
  if (!doc.is_object()) throw DomainError("composition policy must be an object");
  reject_unknown_keys(
      doc, {"min_defect_fraction", "max_defect_fraction", "require_marginal_cases"},
      "composition policy");
  CompositionPolicy p;
  try {
    p.min_defect_fraction = doc.value("min_defect_fraction", p.min_defect_fraction);
    p.max_defect_fraction = doc.value("max_defect_fraction", p.max_defect_fraction);
    p.require_marginal_cases =
        doc.value("require_marginal_cases", p.require_marginal_cases);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("composition policy: ") + e.what());
  }
  validate_policy(p);
  return p;
}

Json to_json(const CompositionPolicy& p) {
  return Json{{"min_defect_fraction", p.min_defect_fraction},
              {"max_defect_fraction", p.max_defect_fraction},
              {"require_marginal_cases", p.require_marginal_cases}};
}

Json to_json(const CompositionVerdict& v) {
  return Json{{"pass", v.pass},
              {"defect_fraction", v.defect_fraction},
              {"marginal_cases_declared", v.marginal_cases_declared},
              {"reasons", v.reasons}};
}

bool declares_marginal_cases(const Labelling& labelling) {
  return std::any_of(labelling.label_types.begin(), labelling.label_types.end(),
                     [](std::string t) {
                       std::transform(t.begin(), t.end(), t.begin(),
                                      [](unsigned char c) {
                                        return static_cast<char>(std::tolower(c));
                                      });
                       return t.find("marginal") != std::string::npos;
                     });
}

CompositionVerdict evaluate_composition(std::uint64_t defects,
                                        std::uint64_t total,
                                        bool marginal_cases_declared,
                                        const CompositionPolicy& policy) {
  validate_policy(policy);
  if (total == 0) throw DomainError("composition check needs at least one sample");
  if (defects > total) {
    throw DomainError("defect count exceeds total sample count");
  }
  CompositionVerdict v;
  v.defect_fraction = static_cast<double>(defects) / static_cast<double>(total);
  v.marginal_cases_declared = marginal_cases_declared;
  if (v.defect_fraction < policy.min_defect_fraction) {
    v.reasons.emplace_back("defect fraction below minimum");
  }
  if (v.defect_fraction > policy.max_defect_fraction) {
    v.reasons.emplace_back("defect fraction above maximum");
  }
  if (policy.require_marginal_cases && !marginal_cases_declared) {
    v.reasons.emplace_back("no marginal-case label type declared");
  }
  v.pass = v.reasons.empty();
  return v;
}

std::uint64_t defect_count(const DatasetSpecSheet& sheet) {
  std::set<std::string> labels(sheet.defect_classes.begin(),
                               sheet.defect_classes.end());
  std::uint64_t n = 0;
  for (const auto& label : labels) {
    auto it = sheet.class_distribution.find(label);
    if (it != sheet.class_distribution.end()) n += it->second;
  }
  return n;
}

CompositionVerdict check_composition(const DatasetSpecSheet& sheet,
                                     const CompositionPolicy& policy) {
  if (sheet.total_samples == 0) {
    throw DomainError("composition check needs at least one sample");
  }
  const auto violations = validate_sheet(sheet);
  if (!violations.empty()) {
    throw DomainError("composition check needs a valid sheet (first violation: " +
                      violations.front().code + ")");
  }
  return evaluate_composition(defect_count(sheet), sheet.total_samples,
                              declares_marginal_cases(sheet.labelling), policy);
}

}  // namespace inspectqual::manifest
