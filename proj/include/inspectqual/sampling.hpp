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

// Attribute-inspection sample sizing.
//
// A validation run tests n known-defective units and counts the misses
// (false negatives). A plan (confidence C, reliability R, allowed failures c)
// asks for the smallest n such that, were the true per-unit detection
// probability only R, seeing c or fewer misses would happen with probability
// at most 1 - C:
//
//     P[Binomial(n, 1 - R) <= c] <= 1 - C
//
// For c = 0 this collapses to the success-run formula
// n = ceil(ln(1 - C) / ln(R)).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace inspectqual::sampling {

/// Plans needing more than this many samples are rejected as infeasible.
inline constexpr std::uint64_t kDefaultMaxSampleSize = 10'000'000;

/// log P[X <= k] for X ~ Binomial(n, p), summed in log space via lgamma.
/// Returns 0 (probability 1) when k >= n.
double log_binomial_cdf(std::uint64_t k, std::uint64_t n, double p);

/// P[X <= k] for X ~ Binomial(n, p).
double binomial_cdf(std::uint64_t k, std::uint64_t n, double p);

/// Zero-failure (success-run) sample size. When the ratio is an exact integer
/// it is returned unchanged.
std::uint64_t success_run_size(double confidence, double reliability);

/// Smallest n meeting the binomial acceptance criterion with up to
/// `allowed_failures` misses. Throws PlanInfeasible past `max_n`.
std::uint64_t plan_size(double confidence, double reliability,
                        std::uint64_t allowed_failures,
                        std::uint64_t max_n = kDefaultMaxSampleSize);

/// Largest reliability demonstrated at `confidence` by observing `failures`
/// misses in `tested_n` trials. Returns 0 when failures == tested_n.
double demonstrated_reliability(std::uint64_t tested_n, std::uint64_t failures,
                                double confidence);

class SamplingPlan {
 public:
  /// Validates parameters and sizes the plan via plan_size.
  static SamplingPlan make(double confidence, double reliability,
                           std::uint64_t allowed_failures,
                           std::uint64_t max_n = kDefaultMaxSampleSize);

  double confidence() const { return confidence_; }
  double reliability() const { return reliability_; }
  std::uint64_t allowed_failures() const { return allowed_failures_; }
  std::uint64_t required_n() const { return required_n_; }

  friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;

 private:
  SamplingPlan(double confidence, double reliability,
               std::uint64_t allowed_failures, std::uint64_t required_n)
      : confidence_(confidence),
        reliability_(reliability),
        allowed_failures_(allowed_failures),
        required_n_(required_n) {}

  double confidence_;
  double reliability_;
  std::uint64_t allowed_failures_;
  std::uint64_t required_n_;
};

struct RunOutcome {
  std::uint64_t tested_n = 0;
  std::uint64_t failures = 0;
};

inline constexpr const char* kReasonFailuresExceeded = "failures exceed allowed";
inline constexpr const char* kReasonInsufficientSamples = "insufficient samples";

struct RunVerdict {
  bool pass = false;
  std::vector<std::string> reasons;  // empty on pass
};

/// Pass iff failures <= allowed and tested_n >= required_n. Throws
/// DomainError when failures > tested_n.
RunVerdict evaluate_run(const RunOutcome& outcome, const SamplingPlan& plan);

}  // namespace inspectqual::sampling
