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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "inspectqual/error.hpp"
#include "inspectqual/rng.hpp"

namespace inspectqual::metrics {
namespace {

constexpr Truth D = Truth::kDefect;
constexpr Truth G = Truth::kGood;
constexpr Verdict R = Verdict::kReject;
constexpr Verdict A = Verdict::kAccept;

TEST(FromPairs, Examples) {
  std::vector<Truth> t1{D, G};
  std::vector<Verdict> p1{R, A};
  EXPECT_EQ(from_pairs(t1, p1), (ConfusionMatrix{1, 0, 0, 1}));

  std::vector<Truth> t2{D, D, G};
  std::vector<Verdict> p2{A, R, R};
  EXPECT_EQ(from_pairs(t2, p2), (ConfusionMatrix{1, 1, 1, 0}));
}

TEST(FromPairs, Errors) {
  std::vector<Truth> none;
  std::vector<Verdict> nonev;
  EXPECT_THROW(from_pairs(none, nonev), DomainError);
  std::vector<Truth> two{D, G};
  std::vector<Verdict> one{R};
  EXPECT_THROW(from_pairs(two, one), DomainError);
}

TEST(Report, HandArithmetic) {
  const auto r = report({9, 1, 5, 85});
  EXPECT_DOUBLE_EQ(*r.recall, 0.9);
  EXPECT_NEAR(*r.precision, 9.0 / 14.0, 1e-15);
  EXPECT_NEAR(*r.specificity, 85.0 / 90.0, 1e-15);
  EXPECT_NEAR(*r.balanced_accuracy, 0.922222, 1e-6);
  EXPECT_NEAR(*r.escape_rate, 0.1, 1e-15);
  EXPECT_NEAR(*r.overkill_rate, 0.055556, 1e-6);
}

TEST(Report, PerfectClassifier) {
  const auto r = report({10, 0, 0, 90});
  EXPECT_EQ(*r.recall, 1.0);
  EXPECT_EQ(*r.precision, 1.0);
  EXPECT_EQ(*r.specificity, 1.0);
  EXPECT_EQ(*r.escape_rate, 0.0);
  EXPECT_EQ(*r.balanced_accuracy, 1.0);
}

TEST(Report, EmptyPositiveClassIsNotComputable) {
  const auto r = report({0, 0, 2, 8});
  EXPECT_FALSE(r.recall.has_value());
  EXPECT_FALSE(r.escape_rate.has_value());
  EXPECT_FALSE(r.balanced_accuracy.has_value());
  EXPECT_DOUBLE_EQ(*r.specificity, 0.8);
  EXPECT_DOUBLE_EQ(*r.precision, 0.0);

  const Json j = to_json(r);
  EXPECT_TRUE(j.at("recall").is_null());
  EXPECT_TRUE(j.at("escape_rate").is_null());
  EXPECT_DOUBLE_EQ(j.at("specificity").get<double>(), 0.8);
}

TEST(Report, AllZeroIsError) { EXPECT_THROW(report({}), DomainError); }

TEST(Labels, RoundTrip) {
  EXPECT_EQ(parse_truth(to_string(D)), D);
  EXPECT_EQ(parse_verdict(to_string(R)), R);
  EXPECT_EQ(to_string(G), "good");
  EXPECT_EQ(to_string(A), "accept");
  EXPECT_THROW(parse_truth("ok"), DomainError);
  EXPECT_THROW(parse_verdict("Reject"), DomainError);
}

TEST(ConfusionJson, RoundTrip) {
  const ConfusionMatrix cm{3, 4, 5, 6};
  EXPECT_EQ(confusion_from_json(to_json(cm)), cm);
  EXPECT_THROW(confusion_from_json(Json{{"tp", -1}, {"fn", 0}, {"fp", 0}, {"tn", 0}}),
               DomainError);
}

TEST(MetricsProperty, InvariantsOnRandomLists) {
  Xoshiro256StarStar rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 400;
    const double defect_rate = rng.uniform();
    std::vector<Truth> truth;
    std::vector<Verdict> pred;
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(rng.bernoulli(defect_rate) ? D : G);
      pred.push_back(rng.bernoulli(0.5) ? R : A);
    }
    const auto cm = from_pairs(truth, pred);
    EXPECT_EQ(cm.total(), n);
    const auto r = report(cm);
    for (const auto& m : {r.balanced_accuracy, r.precision, r.recall, r.specificity,
                          r.escape_rate, r.overkill_rate}) {
      if (m) {
        EXPECT_GE(*m, 0.0);
        EXPECT_LE(*m, 1.0);
      }
    }
    if (r.recall) {
      EXPECT_NEAR(*r.recall + *r.escape_rate, 1.0, 1e-12);
    }
    if (r.recall && r.specificity) {
      EXPECT_NEAR(*r.balanced_accuracy, (*r.recall + *r.specificity) / 2, 1e-12);
    }

    // Permuting pairs leaves the matrix unchanged.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Truth> t2;
    std::vector<Verdict> p2;
    for (auto i : order) {
      t2.push_back(truth[i]);
      p2.push_back(pred[i]);
    }
    EXPECT_EQ(from_pairs(t2, p2), cm);
  }
}

}  // namespace
}  // namespace inspectqual::metrics
