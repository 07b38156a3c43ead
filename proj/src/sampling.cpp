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

#include "inspectqual/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inspectqual/error.hpp"

namespace inspectqual::sampling {
namespace {

void require_open_unit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError(std::string(name) + " must lie strictly inside (0, 1), got " +
                      std::to_string(value));
  }
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) -
         std::lgamma(dn - dk + 1.0);
}

// ln(1 - confidence), the acceptance threshold in log space.
double log_alpha(double confidence) { return std::log1p(-confidence); }

}  // namespace

double log_binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (k >= n || p <= 0.0) return 0.0;
  if (p >= 1.0) return -std::numeric_limits<double>::infinity();

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(k + 1);
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i <= k; ++i) {
    const double t = log_choose(n, i) + static_cast<double>(i) * log_p +
                     static_cast<double>(n - i) * log_q;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return std::min(0.0, max_term + std::log(sum));
}

double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  return std::exp(log_binomial_cdf(k, n, p));
}

std::uint64_t success_run_size(double confidence, double reliability) {
  require_open_unit(confidence, "confidence");
  require_open_unit(reliability, "reliability");
  const double ratio = log_alpha(confidence) / std::log(reliability);
  if (!(ratio < 9.0e15)) {
    throw PlanInfeasible("success-run sample size overflows");
  }
  // Ratios that are integers up to rounding noise are taken as exact.
  const double nearest = std::nearbyint(ratio);
  const double n = std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, nearest)
                       ? nearest
                       : std::ceil(ratio);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

std::uint64_t plan_size(double confidence, double reliability,
                        std::uint64_t allowed_failures, std::uint64_t max_n) {
  const std::uint64_t zero_failure = success_run_size(confidence, reliability);
  const auto infeasible = [&] {
    return PlanInfeasible("plan infeasible: more than " + std::to_string(max_n) +
                          " samples required");
  };
  if (allowed_failures == 0) {
    if (zero_failure > max_n) throw infeasible();
    return zero_failure;
  }

  const double threshold = log_alpha(confidence);
  const double miss_probability = 1.0 - reliability;
  const auto accepts = [&](std::uint64_t n) {
    return log_binomial_cdf(allowed_failures, n, miss_probability) <= threshold;
  };

  // Allowing misses never shrinks the plan, and n <= allowed_failures can
  // never accept, so `lo` is a known-rejecting size.
  std::uint64_t lo = std::max(zero_failure, allowed_failures + 1) - 1;
  if (lo >= max_n) throw infeasible();
  std::uint64_t hi = std::min(max_n, lo + std::max<std::uint64_t>(lo, 1));
  while (!accepts(hi)) {
    if (hi == max_n) throw infeasible();
    lo = hi;
    hi = std::min(max_n, hi * 2);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (accepts(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double demonstrated_reliability(std::uint64_t tested_n, std::uint64_t failures,
                                double confidence) {
  require_open_unit(confidence, "confidence");
  if (tested_n == 0) throw DomainError("tested_n must be at least 1");
  if (failures > tested_n) {
    throw DomainError("failures (" + std::to_string(failures) +
                      ") exceed tested_n (" + std::to_string(tested_n) + ")");
  }
  if (failures == tested_n) return 0.0;
  if (failures == 0) {
    return std::exp(log_alpha(confidence) / static_cast<double>(tested_n));
  }

  const double threshold = log_alpha(confidence);
  double lo = 0.0;  // always accepting
  double hi = 1.0;  // never accepting
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (log_binomial_cdf(failures, tested_n, 1.0 - mid) <= threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

SamplingPlan SamplingPlan::make(double confidence, double reliability,
                                std::uint64_t allowed_failures,
                                std::uint64_t max_n) {
  const std::uint64_t n =
      plan_size(confidence, reliability, allowed_failures, max_n);
  return SamplingPlan(confidence, reliability, allowed_failures, n);
}

RunVerdict evaluate_run(const RunOutcome& outcome, const SamplingPlan& plan) {
  if (outcome.failures > outcome.tested_n) {
    throw DomainError("failures (" + std::to_string(outcome.failures) +
                      ") exceed tested_n (" + std::to_string(outcome.tested_n) +
                      ")");
  }
  RunVerdict verdict;
  if (outcome.failures > plan.allowed_failures()) {
    verdict.reasons.emplace_back(kReasonFailuresExceeded);
  }
  if (outcome.tested_n < plan.required_n()) {
    verdict.reasons.emplace_back(kReasonInsufficientSamples);
  }
  verdict.pass = verdict.reasons.empty();
  return verdict;
}

}  // namespace inspectqual::sampling
