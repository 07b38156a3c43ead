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

#include "inspectqual/metrics.hpp"

#include <string>

#include "inspectqual/error.hpp"

namespace inspectqual {

std::string_view to_string(Truth t) {
  return t == Truth::kDefect ? "defect" : "good";
}

std::string_view to_string(Verdict v) {
  return v == Verdict::kReject ? "reject" : "accept";
}

Truth parse_truth(std::string_view s) {
  if (s == "defect") return Truth::kDefect;
  if (s == "good") return Truth::kGood;
  throw DomainError("unknown truth label '" + std::string(s) +
                    "' (expected defect|good)");
}

Verdict parse_verdict(std::string_view s) {
  if (s == "reject") return Verdict::kReject;
  if (s == "accept") return Verdict::kAccept;
  throw DomainError("unknown verdict '" + std::string(s) +
                    "' (expected accept|reject)");
}

}  // namespace inspectqual

namespace inspectqual::metrics {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

void ConfusionMatrix::add(Truth truth, Verdict predicted) {
  const bool positive = predicted == Verdict::kReject;
  if (truth == Truth::kDefect) {
    ++(positive ? tp : fn);
  } else {
    ++(positive ? fp : tn);
  }
}

ConfusionMatrix from_pairs(std::span<const Truth> truth,
                           std::span<const Verdict> predicted) {
  if (truth.size() != predicted.size()) {
    throw DomainError("truth and prediction lists differ in length (" +
                      std::to_string(truth.size()) + " vs " +
                      std::to_string(predicted.size()) + ")");
  }
  if (truth.empty()) throw DomainError("no truth/prediction pairs");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DomainError("confusion matrix is empty");
  MetricsReport r;
  r.recall = ratio(cm.tp, cm.positives());
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.specificity = ratio(cm.tn, cm.negatives());
  r.escape_rate = ratio(cm.fn, cm.positives());
  r.overkill_rate = ratio(cm.fp, cm.negatives());
  if (r.recall && r.specificity) {
    r.balanced_accuracy = 0.5 * (*r.recall + *r.specificity);
  }
  return r;
}

Json to_json(const ConfusionMatrix& cm) {
  return Json{{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}};
}

ConfusionMatrix confusion_from_json(const Json& doc) {
  const auto count = [&doc](const char* key) {
    if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_number_unsigned()) {
      throw DomainError(std::string("confusion matrix: '") + key +
                        "' must be a non-negative integer");
    }
    return doc.at(key).get<std::uint64_t>();
  };
  return ConfusionMatrix{count("tp"), count("fn"), count("fp"), count("tn")};
}

Json to_json(const MetricsReport& r) {
  return Json{{"balanced_accuracy", optional_json(r.balanced_accuracy)},
              {"precision", optional_json(r.precision)},
              {"recall", optional_json(r.recall)},
              {"specificity", optional_json(r.specificity)},
              {"escape_rate", optional_json(r.escape_rate)},
              {"overkill_rate", optional_json(r.overkill_rate)}};
}

}  // namespace inspectqual::metrics
