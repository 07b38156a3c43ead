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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "inspectqual/canonical.hpp"

namespace inspectqual {

/// Ground truth of an inspected unit. "Defect" is the positive class.
enum class Truth { kDefect, kGood };

/// Inspection verdict. "Reject" is a positive prediction.
enum class Verdict { kAccept, kReject };

std::string_view to_string(Truth t);
std::string_view to_string(Verdict v);
Truth parse_truth(std::string_view s);
Verdict parse_verdict(std::string_view s);

}  // namespace inspectqual

namespace inspectqual::metrics {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return fp + tn; }

  void add(Truth truth, Verdict predicted);

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

/// Each metric is empty when its denominator is zero. Balanced accuracy is
/// empty whenever recall or specificity is.
struct MetricsReport {
  std::optional<double> balanced_accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> escape_rate;    // fn / (tp + fn)
  std::optional<double> overkill_rate;  // fp / (fp + tn)
};

/// Throws DomainError on length mismatch or empty input.
ConfusionMatrix from_pairs(std::span<const Truth> truth,
                           std::span<const Verdict> predicted);

/// Throws DomainError on an all-zero matrix.
MetricsReport report(const ConfusionMatrix& cm);

Json to_json(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_json(const Json& doc);

/// Not-computable metrics serialize as null.
Json to_json(const MetricsReport& r);

}  // namespace inspectqual::metrics
