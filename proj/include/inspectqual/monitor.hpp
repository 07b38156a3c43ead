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

// Post-deployment surveillance for locked models.
//
// Drift: each feature dimension is cut into equal-probability bins at the
// quantiles of a validation-time reference set; a production window is scored
// per dimension with the population stability index
//
//     PSI = sum_b (q_b - p_b) * ln(q_b / p_b)
//
// (p = reference proportion, q = window proportion, both floored at 1e-6),
// and the worst dimension decides the status.
//
// Retention: rejected units are always kept; accepted units are kept with
// probability p, decided by a hash of the unit id so each decision can be
// reproduced in isolation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inspectqual/canonical.hpp"
#include "inspectqual/metrics.hpp"

namespace inspectqual::monitor {

using FeatureVector = std::vector<double>;

inline constexpr std::size_t kDefaultBinsPerDim = 10;
inline constexpr std::size_t kDefaultMinFitSize = 100;
inline constexpr double kProportionFloor = 1e-6;

struct ReferenceModel {
  std::size_t dim = 0;
  std::size_t bins_per_dim = kDefaultBinsPerDim;  // requested; ties may merge bins
  std::size_t min_fit_size = kDefaultMinFitSize;
  // Interior cut points per dimension, strictly increasing. Bin b holds
  // values in [edges[b-1], edges[b]); the outer bins are unbounded.
  std::vector<std::vector<double>> edges;
  std::vector<std::vector<double>> proportions;  // edges[d].size() + 1 entries
  std::uint64_t fitted_on = 0;
  std::string digest;
};

/// Throws DomainError when there are fewer than `min_fit_size` vectors,
/// dimensions are ragged or zero, a value is not finite, or bins_per_dim == 0.
ReferenceModel fit_reference(std::span<const FeatureVector> vectors,
                             std::size_t bins_per_dim = kDefaultBinsPerDim,
                             std::size_t min_fit_size = kDefaultMinFitSize);

/// Index of the bin that holds `value`.
std::size_t bin_index(std::span<const double> edges, double value);

Json to_json(const ReferenceModel& model);

/// Parses and checks a persisted model (digest, edge order, proportion sums).
ReferenceModel reference_from_json(const Json& doc);

struct DriftThresholds {
  double warn = 0.10;
  double alert = 0.25;
};

enum class DriftStatus { kOk, kWarn, kAlert };

std::string_view to_string(DriftStatus s);

/// Throws DomainError unless 0 <= warn <= alert.
void validate_thresholds(const DriftThresholds& t);
DriftStatus status_for(double max_psi, const DriftThresholds& t);

/// PSI between two proportion vectors of equal length.
double psi(std::span<const double> reference, std::span<const double> window);

struct DriftReport {
  std::vector<double> per_dim_psi;
  double max_psi = 0.0;
  DriftStatus status = DriftStatus::kOk;
  std::size_t window_size = 0;
  DriftThresholds thresholds;
  std::string reference_digest;
};

/// Throws DomainError on an empty window or dimension mismatch.
DriftReport score_window(const ReferenceModel& model,
                         std::span<const FeatureVector> window,
                         const DriftThresholds& thresholds = {});

Json to_json(const DriftReport& report);

/// Feature vectors as JSON lines (one array per line) or CSV (one row per
/// line, '#' comment lines skipped). Format is detected from the first
/// non-blank character.
std::vector<FeatureVector> parse_vectors(std::string_view text);

struct RetentionPolicy {
  double nondefect_fraction = 0.0;
  std::uint64_t seed = 0;
};

enum class RetentionDecision { kKeep, kDrop };

std::string_view to_string(RetentionDecision d);
RetentionDecision parse_retention_decision(std::string_view s);

/// FNV-1a 64 over the unit id bytes followed by the seed as 8 little-endian
/// bytes.
std::uint64_t retention_hash(std::string_view unit_id, std::uint64_t seed);

/// Rejects are always kept. Accepts are kept iff
/// retention_hash(unit_id, seed) / 2^64 < nondefect_fraction.
RetentionDecision retention_decision(std::string_view unit_id, Verdict verdict,
                                     const RetentionPolicy& policy);

struct RetentionRecord {
  std::string unit_id;
  Verdict verdict = Verdict::kAccept;
  RetentionDecision decision = RetentionDecision::kKeep;
};

Json to_json(const RetentionRecord& r);
RetentionRecord retention_record_from_json(const Json& doc);

struct RetentionCounts {
  std::uint64_t reject_kept = 0;
  std::uint64_t reject_dropped = 0;
  std::uint64_t accept_kept = 0;
  std::uint64_t accept_dropped = 0;

  friend bool operator==(const RetentionCounts&, const RetentionCounts&) = default;
};

RetentionCounts count_decisions(std::span<const RetentionRecord> records);

/// Manifest document with counts, the decision list and a digest over the
/// rest of the document.
Json retention_manifest(std::span<const RetentionRecord> records);

}  // namespace inspectqual::monitor
