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

#include "inspectqual/tmv.hpp"

#include <unordered_set>

#include "inspectqual/error.hpp"

namespace inspectqual::tmv {
namespace {

constexpr const char* kNoDefectSamples = "no defect samples";

std::string string_field(const Json& doc, const char* key, const char* what) {
  if (!doc.contains(key) || !doc.at(key).is_string()) {
    throw DomainError(std::string(what) + ": missing or non-string field '" +
                      key + "'");
  }
  return doc.at(key).get<std::string>();
}

Json plan_json(const sampling::SamplingPlan& plan) {
  return Json{{"confidence", plan.confidence()},
              {"reliability", plan.reliability()},
              {"allowed_failures", plan.allowed_failures()},
              {"required_n", plan.required_n()}};
}

Json body_json(const TmvReport& r) {
  return Json{
      {"protocol_id", r.protocol_id},
      {"dataset_sheet_digest", r.dataset_sheet_digest},
      {"plan", plan_json(r.plan)},
      {"counts", metrics::to_json(r.counts)},
      {"metrics", metrics::to_json(metrics::report(r.counts))},
      {"plan_verdict",
       {{"pass", r.plan_verdict.pass},
        {"tested_n", r.outcome.tested_n},
        {"failures", r.outcome.failures},
        {"reasons", r.plan_verdict.reasons}}},
      {"composition_verdict", manifest::to_json(r.composition_verdict)},
      {"demonstrated_reliability", r.demonstrated_reliability
                                       ? Json(*r.demonstrated_reliability)
                                       : Json(nullptr)},
      {"overall", r.pass ? "pass" : "fail"},
      {"reasons", r.reasons}};
}

}  // namespace

TmvProtocol protocol_from_json(const Json& doc) {
  constexpr const char* kWhat = "tmv protocol";
  if (!doc.is_object()) throw DomainError("tmv protocol must be a JSON object");
  const std::string id = string_field(doc, "protocol_id", kWhat);
  if (id.empty()) throw DomainError("tmv protocol: empty protocol_id");
  const std::string digest = string_field(doc, "dataset_sheet_digest", kWhat);
  if (!is_sha256_hex(digest)) {
    throw DomainError("tmv protocol: dataset_sheet_digest must be 64 lowercase "
                      "hex characters");
  }
  if (!doc.contains("plan") || !doc.at("plan").is_object()) {
    throw DomainError("tmv protocol: missing plan object");
  }
  const Json& plan = doc.at("plan");
  double confidence = 0.0;
  double reliability = 0.0;
  std::uint64_t allowed = 0;
  try {
    confidence = plan.at("confidence").get<double>();
    reliability = plan.at("reliability").get<double>();
    if (plan.contains("allowed_failures")) {
      if (!plan.at("allowed_failures").is_number_unsigned()) {
        throw DomainError("tmv protocol: allowed_failures must be a "
                          "non-negative integer");
      }
      allowed = plan.at("allowed_failures").get<std::uint64_t>();
    }
  } catch (const Json::exception& e) {
    throw DomainError(std::string("tmv protocol plan: ") + e.what());
  }
  manifest::CompositionPolicy composition;
  if (doc.contains("composition")) {
    composition = manifest::policy_from_json(doc.at("composition"));
  }
  std::string description;
  if (doc.contains("description")) {
    description = string_field(doc, "description", kWhat);
  }
  return TmvProtocol{id, sampling::SamplingPlan::make(confidence, reliability, allowed),
                     composition, digest, description};
}

Json to_json(const TmvProtocol& p) {
  return Json{{"protocol_id", p.protocol_id},
              {"plan",
               {{"confidence", p.plan.confidence()},
                {"reliability", p.plan.reliability()},
                {"allowed_failures", p.plan.allowed_failures()}}},
              {"composition", manifest::to_json(p.composition)},
              {"dataset_sheet_digest", p.dataset_sheet_digest},
              {"description", p.description}};
}

TmvSample sample_from_json(const Json& doc) {
  constexpr const char* kWhat = "tmv sample";
  if (!doc.is_object()) throw DomainError("tmv sample must be a JSON object");
  TmvSample s;
  s.unit_id = string_field(doc, "unit_id", kWhat);
  if (s.unit_id.empty()) throw DomainError("tmv sample: empty unit_id");
  s.truth = parse_truth(string_field(doc, "truth", kWhat));
  s.model_verdict = parse_verdict(string_field(doc, "model_verdict", kWhat));
  return s;
}

Json to_json(const TmvSample& s) {
  return Json{{"unit_id", s.unit_id},
              {"truth", to_string(s.truth)},
              {"model_verdict", to_string(s.model_verdict)}};
}

std::vector<TmvSample> parse_samples(std::string_view jsonl) {
  std::vector<TmvSample> out;
  for (const Json& line : parse_json_lines(jsonl, "tmv samples")) {
    out.push_back(sample_from_json(line));
  }
  return out;
}

TmvReport execute(const TmvProtocol& protocol,
                  const manifest::DatasetSpecSheet& sheet,
                  std::span<const TmvSample> samples) {
  if (protocol.protocol_id.empty()) throw DomainError("tmv protocol: empty protocol_id");
  const std::string sheet_digest = manifest::canonical_digest(sheet);
  if (sheet_digest != protocol.dataset_sheet_digest) {
    throw DomainError("dataset sheet digest " + sheet_digest +
                      " does not match protocol reference " +
                      protocol.dataset_sheet_digest);
  }
  if (samples.empty()) throw DomainError("tmv run needs at least one sample");

  std::unordered_set<std::string> seen;
  TmvReport r{protocol.protocol_id, protocol.dataset_sheet_digest, protocol.plan,
              {}, {}, {}, {}, std::nullopt, false, {}, {}};
  for (const auto& s : samples) {
    if (!seen.insert(s.unit_id).second) {
      throw DomainError("duplicate unit_id in tmv samples: " + s.unit_id);
    }
    r.counts.add(s.truth, s.model_verdict);
  }

  r.outcome = {r.counts.positives(), r.counts.fn};
  r.plan_verdict = sampling::evaluate_run(r.outcome, protocol.plan);
  if (r.outcome.tested_n > 0) {
    r.demonstrated_reliability = sampling::demonstrated_reliability(
        r.outcome.tested_n, r.outcome.failures, protocol.plan.confidence());
  }
  r.composition_verdict = manifest::evaluate_composition(
      r.counts.positives(), r.counts.total(),
      manifest::declares_marginal_cases(sheet.labelling), protocol.composition);

  if (r.outcome.tested_n == 0) r.reasons.emplace_back(kNoDefectSamples);
  for (const auto& reason : r.plan_verdict.reasons) r.reasons.push_back(reason);
  for (const auto& reason : r.composition_verdict.reasons) {
    r.reasons.push_back(reason);
  }
  r.pass = r.plan_verdict.pass && r.composition_verdict.pass;
  r.report_digest = canonical_digest(body_json(r));
  return r;
}

Json to_json(const TmvReport& r) {
  Json doc = body_json(r);
  doc["report_digest"] = r.report_digest;
  return doc;
}

Json report_to_audit(const TmvReport& r, std::string_view actor) {
  return Json{{"kind", "TMV_REPORT"},
              {"report_digest", r.report_digest},
              {"protocol_id", r.protocol_id},
              {"overall", r.pass ? "pass" : "fail"},
              {"actor", actor}};
}

}  // namespace inspectqual::tmv
