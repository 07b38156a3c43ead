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

// Test method validation of the model as an attribute inspection method.
//
// Defect samples form the reliability demonstration (tested_n = defect
// count, failures = defects the model accepted). All samples feed the
// composition rule. The run is tied to a frozen dataset sheet by digest.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inspectqual/canonical.hpp"
#include "inspectqual/manifest.hpp"
#include "inspectqual/metrics.hpp"
#include "inspectqual/sampling.hpp"

namespace inspectqual::tmv {

struct TmvProtocol {
  std::string protocol_id;
  sampling::SamplingPlan plan;
  manifest::CompositionPolicy composition;
  std::string dataset_sheet_digest;
  std::string description;
};

TmvProtocol protocol_from_json(const Json& doc);
Json to_json(const TmvProtocol& p);

struct TmvSample {
  std::string unit_id;
  Truth truth = Truth::kGood;
  Verdict model_verdict = Verdict::kAccept;
};

TmvSample sample_from_json(const Json& doc);
Json to_json(const TmvSample& s);
std::vector<TmvSample> parse_samples(std::string_view jsonl);

struct TmvReport {
  std::string protocol_id;
  std::string dataset_sheet_digest;
  sampling::SamplingPlan plan;
  metrics::ConfusionMatrix counts;
  sampling::RunOutcome outcome;
  sampling::RunVerdict plan_verdict;
  manifest::CompositionVerdict composition_verdict;
  std::optional<double> demonstrated_reliability;  // empty without defects
  bool pass = false;
  std::vector<std::string> reasons;
  std::string report_digest;
};

/// Runs the validation. `sheet` must digest to protocol.dataset_sheet_digest;
/// its label types decide whether marginal cases were declared. Throws
/// DomainError on empty or duplicate-id samples and on a sheet mismatch.
TmvReport execute(const TmvProtocol& protocol,
                  const manifest::DatasetSpecSheet& sheet,
                  std::span<const TmvSample> samples);

/// Canonical report document including report_digest.
Json to_json(const TmvReport& report);

/// Audit payload referencing the report by digest.
Json report_to_audit(const TmvReport& report, std::string_view actor);

}  // namespace inspectqual::tmv
