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

// Blinded shadow trial analysis. The model runs in production with its
// verdicts hidden while human inspection stays authoritative; afterwards the
// two verdict streams are compared, and the model may proceed to formal
// validation only when enough adjudicated defects have been seen, the model
// missed no more of them than the validation plan allows, and its false
// reject rate on adjudicated-good units is within bound.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inspectqual/canonical.hpp"
#include "inspectqual/metrics.hpp"

namespace inspectqual::shadow {

struct ShadowRecord {
  std::string unit_id;
  std::string timestamp;  // RFC 3339
  Verdict human_verdict = Verdict::kAccept;
  Verdict model_verdict = Verdict::kAccept;
  std::optional<double> model_score;
  std::optional<Truth> adjudicated_truth;  // empty = unknown

  friend bool operator==(const ShadowRecord&, const ShadowRecord&) = default;
};

Json to_json(const ShadowRecord& r);
ShadowRecord record_from_json(const Json& doc);

/// JSON lines, one record per line.
std::vector<ShadowRecord> parse_records(std::string_view jsonl);
std::string serialize_records(std::span<const ShadowRecord> records);

struct ShadowTrialConfig {
  double target_confidence = 0.95;
  double target_reliability = 0.99;
  std::uint64_t allowed_failures = 0;
  double max_overkill_rate = 0.05;
  std::string window_start;
  std::string window_end;
};

/// Throws DomainError on out-of-range probabilities or start >= end.
void validate_config(const ShadowTrialConfig& config);
ShadowTrialConfig config_from_json(const Json& doc);
Json to_json(const ShadowTrialConfig& config);

struct ConcordanceReport {
  std::uint64_t records = 0;
  std::uint64_t agreements = 0;
  double agreement_rate = 0.0;
  std::uint64_t model_only_rejects = 0;
  std::uint64_t human_only_rejects = 0;
  std::uint64_t adjudicated = 0;
  std::uint64_t unknown_truth = 0;
  // Model verdict vs adjudicated truth; unknown-truth records excluded.
  metrics::ConfusionMatrix adjudicated_matrix;
};

/// Throws DomainError for an empty record list.
ConcordanceReport concordance(std::span<const ShadowRecord> records);
Json to_json(const ConcordanceReport& c);

struct Sufficiency {
  bool sufficient = false;
  std::uint64_t confirmed_defects = 0;
  std::uint64_t required = 0;
};

Sufficiency sufficiency(std::span<const ShadowRecord> records,
                        const ShadowTrialConfig& config);
Json to_json(const Sufficiency& s);

enum class GateOutcome { kProceed, kHold };

inline constexpr const char* kCriterionSufficiency = "sufficiency";
inline constexpr const char* kCriterionFalseNegatives = "false_negatives";
inline constexpr const char* kCriterionOverkill = "overkill";

inline constexpr const char* kReasonInsufficientDefects =
    "insufficient confirmed defects";
inline constexpr const char* kReasonFalseNegatives = "false negatives observed";
inline constexpr const char* kReasonOverkillExceeded = "overkill rate exceeds limit";
inline constexpr const char* kReasonOverkillUnknown =
    "overkill rate not computable (no confirmed-good units)";

struct GateCriterion {
  std::string criterion;
  bool satisfied = false;
  std::string detail;
};

struct GateDecision {
  GateOutcome decision = GateOutcome::kHold;
  // One entry per criterion, in evaluation order.
  std::vector<GateCriterion> reasons;
  ConcordanceReport concordance;
  Sufficiency sufficiency;
  metrics::ConfusionMatrix defect_confusion;
  std::optional<double> overkill_rate;
};

/// Evaluates the three progression criteria. An empty record list yields a
/// hold (there is nothing to compare).
GateDecision gate(std::span<const ShadowRecord> records,
                  const ShadowTrialConfig& config);

std::string_view to_string(GateOutcome g);

/// Gate report document: config, statistics, decision and reasons.
Json gate_report(const GateDecision& decision, const ShadowTrialConfig& config);

struct DetectionProfile {
  double sensitivity = 1.0;  // P(reject | defect)
  double specificity = 1.0;  // P(accept | good)
};

struct SimulationParams {
  std::uint64_t seed = 0;
  std::uint64_t n_units = 0;
  double defect_rate = 0.0;
  DetectionProfile model;
  DetectionProfile human;
  std::int64_t start_epoch_seconds = 1767225600;  // 2026-01-01T00:00:00Z
  std::int64_t interval_seconds = 60;
};

/// Deterministic synthetic stream: per unit, draws truth, then the model
/// verdict, then the human verdict from one xoshiro256** stream.
std::vector<ShadowRecord> simulate_stream(const SimulationParams& params);

}  // namespace inspectqual::shadow
