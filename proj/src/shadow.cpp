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

#include "inspectqual/shadow.hpp"

#include <cstdio>

#include "inspectqual/error.hpp"
#include "inspectqual/rng.hpp"
#include "inspectqual/sampling.hpp"
#include "inspectqual/timestamp.hpp"

namespace inspectqual::shadow {
namespace {

std::string require_string(const Json& doc, const char* key, const char* what) {
  if (!doc.contains(key) || !doc.at(key).is_string()) {
    throw DomainError(std::string(what) + ": missing or non-string field '" +
                      key + "'");
  }
  return doc.at(key).get<std::string>();
}

double require_number(const Json& doc, const char* key, const char* what) {
  if (!doc.contains(key) || !doc.at(key).is_number()) {
    throw DomainError(std::string(what) + ": missing or non-numeric field '" +
                      key + "'");
  }
  return doc.at(key).get<double>();
}

void require_unit_interval(double p, const char* name, bool open) {
  const bool ok = open ? (p > 0.0 && p < 1.0) : (p >= 0.0 && p <= 1.0);
  if (!ok) {
    throw DomainError(std::string(name) + " must lie in " +
                      (open ? "(0, 1)" : "[0, 1]"));
  }
}

ConcordanceReport tally(std::span<const ShadowRecord> records) {
  ConcordanceReport c;
  c.records = records.size();
  for (const auto& r : records) {
    if (r.human_verdict == r.model_verdict) {
      ++c.agreements;
    } else if (r.model_verdict == Verdict::kReject) {
      ++c.model_only_rejects;
    } else {
      ++c.human_only_rejects;
    }
    if (r.adjudicated_truth) {
      ++c.adjudicated;
      c.adjudicated_matrix.add(*r.adjudicated_truth, r.model_verdict);
    } else {
      ++c.unknown_truth;
    }
  }
  if (c.records > 0) {
    c.agreement_rate =
        static_cast<double>(c.agreements) / static_cast<double>(c.records);
  }
  return c;
}

}  // namespace

Json to_json(const ShadowRecord& r) {
  Json doc{{"unit_id", r.unit_id},
           {"timestamp", r.timestamp},
           {"human_verdict", to_string(r.human_verdict)},
           {"model_verdict", to_string(r.model_verdict)},
           {"adjudicated_truth",
            r.adjudicated_truth ? to_string(*r.adjudicated_truth) : "unknown"}};
  if (r.model_score) doc["model_score"] = *r.model_score;
  return doc;
}

ShadowRecord record_from_json(const Json& doc) {
  constexpr const char* kWhat = "shadow record";
  if (!doc.is_object()) throw DomainError("shadow record must be a JSON object");
  ShadowRecord r;
  r.unit_id = require_string(doc, "unit_id", kWhat);
  if (r.unit_id.empty()) throw DomainError("shadow record: empty unit_id");
  r.timestamp = require_string(doc, "timestamp", kWhat);
  require_rfc3339(r.timestamp, "shadow record timestamp");
  r.human_verdict = parse_verdict(require_string(doc, "human_verdict", kWhat));
  r.model_verdict = parse_verdict(require_string(doc, "model_verdict", kWhat));
  if (doc.contains("model_score") && !doc.at("model_score").is_null()) {
    const double score = require_number(doc, "model_score", kWhat);
    require_unit_interval(score, "model_score", false);
    r.model_score = score;
  }
  if (doc.contains("adjudicated_truth")) {
    const std::string truth = require_string(doc, "adjudicated_truth", kWhat);
    if (truth != "unknown") r.adjudicated_truth = parse_truth(truth);
  }
  return r;
}

std::vector<ShadowRecord> parse_records(std::string_view jsonl) {
  std::vector<ShadowRecord> out;
  for (const Json& line : parse_json_lines(jsonl, "shadow records")) {
    out.push_back(record_from_json(line));
  }
  return out;
}

std::string serialize_records(std::span<const ShadowRecord> records) {
  std::string out;
  for (const auto& r : records) out += canonical_json(to_json(r));
  return out;
}

void validate_config(const ShadowTrialConfig& c) {
  require_unit_interval(c.target_confidence, "target_confidence", true);
  require_unit_interval(c.target_reliability, "target_reliability", true);
  require_unit_interval(c.max_overkill_rate, "max_overkill_rate", false);
  const Instant start = require_rfc3339(c.window_start, "window start");
  const Instant end = require_rfc3339(c.window_end, "window end");
  if (!(start < end)) throw DomainError("trial window start must precede end");
}

ShadowTrialConfig config_from_json(const Json& doc) {
  constexpr const char* kWhat = "shadow trial config";
  if (!doc.is_object()) throw DomainError("shadow trial config must be an object");
  ShadowTrialConfig c;
  c.target_confidence = require_number(doc, "target_confidence", kWhat);
  c.target_reliability = require_number(doc, "target_reliability", kWhat);
  if (!doc.contains("allowed_failures") ||
      !doc.at("allowed_failures").is_number_unsigned()) {
    throw DomainError("shadow trial config: allowed_failures must be a "
                      "non-negative integer");
  }
  c.allowed_failures = doc.at("allowed_failures").get<std::uint64_t>();
  c.max_overkill_rate = require_number(doc, "max_overkill_rate", kWhat);
  if (!doc.contains("window") || !doc.at("window").is_object()) {
    throw DomainError("shadow trial config: missing window object");
  }
  c.window_start = require_string(doc.at("window"), "start", kWhat);
  c.window_end = require_string(doc.at("window"), "end", kWhat);
  validate_config(c);
  return c;
}

Json to_json(const ShadowTrialConfig& c) {
  return Json{{"target_confidence", c.target_confidence},
              {"target_reliability", c.target_reliability},
              {"allowed_failures", c.allowed_failures},
              {"max_overkill_rate", c.max_overkill_rate},
              {"window", {{"start", c.window_start}, {"end", c.window_end}}}};
}

ConcordanceReport concordance(std::span<const ShadowRecord> records) {
  if (records.empty()) throw DomainError("concordance needs at least one record");
  return tally(records);
}

Json to_json(const ConcordanceReport& c) {
  return Json{{"records", c.records},
              {"agreements", c.agreements},
              {"agreement_rate", c.agreement_rate},
              {"model_only_rejects", c.model_only_rejects},
              {"human_only_rejects", c.human_only_rejects},
              {"adjudicated", c.adjudicated},
              {"unknown_truth", c.unknown_truth},
              {"adjudicated_matrix", metrics::to_json(c.adjudicated_matrix)}};
}

Sufficiency sufficiency(std::span<const ShadowRecord> records,
                        const ShadowTrialConfig& config) {
  validate_config(config);
  Sufficiency s;
  s.required = sampling::plan_size(config.target_confidence,
                                   config.target_reliability,
                                   config.allowed_failures);
  for (const auto& r : records) {
    if (r.adjudicated_truth == Truth::kDefect) ++s.confirmed_defects;
  }
  s.sufficient = s.confirmed_defects >= s.required;
  return s;
}

Json to_json(const Sufficiency& s) {
  return Json{{"sufficient", s.sufficient},
              {"confirmed_defects", s.confirmed_defects},
              {"required", s.required}};
}

GateDecision gate(std::span<const ShadowRecord> records,
                  const ShadowTrialConfig& config) {
  GateDecision g;
  g.sufficiency = sufficiency(records, config);
  g.concordance = tally(records);
  g.defect_confusion = g.concordance.adjudicated_matrix;
  const auto& cm = g.defect_confusion;

  g.reasons.push_back(
      {kCriterionSufficiency, g.sufficiency.sufficient,
       g.sufficiency.sufficient
           ? "confirmed defects " + std::to_string(g.sufficiency.confirmed_defects) +
                 " >= required " + std::to_string(g.sufficiency.required)
           : std::string(kReasonInsufficientDefects) + ": " +
                 std::to_string(g.sufficiency.confirmed_defects) + " < " +
                 std::to_string(g.sufficiency.required)});

  const bool fn_ok = cm.fn <= config.allowed_failures;
  g.reasons.push_back(
      {kCriterionFalseNegatives, fn_ok,
       fn_ok ? "false negatives " + std::to_string(cm.fn) + " <= allowed " +
                   std::to_string(config.allowed_failures)
             : std::string(kReasonFalseNegatives) + ": " + std::to_string(cm.fn) +
                   " > allowed " + std::to_string(config.allowed_failures)});

  if (cm.negatives() > 0) {
    g.overkill_rate =
        static_cast<double>(cm.fp) / static_cast<double>(cm.negatives());
  }
  const bool overkill_ok =
      g.overkill_rate && *g.overkill_rate <= config.max_overkill_rate;
  std::string overkill_detail;
  if (!g.overkill_rate) {
    overkill_detail = kReasonOverkillUnknown;
  } else {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f %s %.6f", *g.overkill_rate,
                  overkill_ok ? "<=" : ">", config.max_overkill_rate);
    overkill_detail = overkill_ok ? std::string("overkill rate ") + buf
                                  : std::string(kReasonOverkillExceeded) + ": " + buf;
  }
  g.reasons.push_back({kCriterionOverkill, overkill_ok, overkill_detail});

  g.decision = g.sufficiency.sufficient && fn_ok && overkill_ok
                   ? GateOutcome::kProceed
                   : GateOutcome::kHold;
  return g;
}

std::string_view to_string(GateOutcome g) {
  return g == GateOutcome::kProceed ? "proceed" : "hold";
}

Json gate_report(const GateDecision& g, const ShadowTrialConfig& config) {
  Json reasons = Json::array();
  for (const auto& r : g.reasons) {
    reasons.push_back({{"criterion", r.criterion},
                       {"satisfied", r.satisfied},
                       {"detail", r.detail}});
  }
  return Json{
      {"config", to_json(config)},
      {"decision", to_string(g.decision)},
      {"reasons", std::move(reasons)},
      {"concordance", to_json(g.concordance)},
      {"sufficiency", to_json(g.sufficiency)},
      {"defect_confusion", metrics::to_json(g.defect_confusion)},
      {"overkill_rate", g.overkill_rate ? Json(*g.overkill_rate) : Json(nullptr)}};
}

std::vector<ShadowRecord> simulate_stream(const SimulationParams& p) {
  if (p.n_units == 0) throw DomainError("simulation needs at least one unit");
  require_unit_interval(p.defect_rate, "defect_rate", false);
  require_unit_interval(p.model.sensitivity, "model sensitivity", false);
  require_unit_interval(p.model.specificity, "model specificity", false);
  require_unit_interval(p.human.sensitivity, "human sensitivity", false);
  require_unit_interval(p.human.specificity, "human specificity", false);

  Xoshiro256StarStar rng(p.seed);
  const auto draw_verdict = [&rng](Truth truth, const DetectionProfile& profile) {
    const double reject_p =
        truth == Truth::kDefect ? profile.sensitivity : 1.0 - profile.specificity;
    return rng.bernoulli(reject_p) ? Verdict::kReject : Verdict::kAccept;
  };

  std::vector<ShadowRecord> out;
  out.reserve(p.n_units);
  char id[32];
  for (std::uint64_t i = 0; i < p.n_units; ++i) {
    ShadowRecord r;
    std::snprintf(id, sizeof(id), "U%08llu", static_cast<unsigned long long>(i));
    r.unit_id = id;
    r.timestamp = format_rfc3339(p.start_epoch_seconds +
                                 static_cast<std::int64_t>(i) * p.interval_seconds);
    const Truth truth = rng.bernoulli(p.defect_rate) ? Truth::kDefect : Truth::kGood;
    r.model_verdict = draw_verdict(truth, p.model);
    r.human_verdict = draw_verdict(truth, p.human);
    r.adjudicated_truth = truth;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace inspectqual::shadow
