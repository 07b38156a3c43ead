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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "inspectqual/error.hpp"
#include "test_support.hpp"

namespace inspectqual::shadow {
namespace {

using ::inspectqual::testing::make_config;
using ::inspectqual::testing::oracle_gate_proceeds;

ShadowRecord rec(int i, Verdict human, Verdict model, std::optional<Truth> truth) {
  ShadowRecord r;
  r.unit_id = "unit-" + std::to_string(i);
  r.timestamp = "2026-02-01T10:00:00Z";
  r.human_verdict = human;
  r.model_verdict = model;
  r.adjudicated_truth = truth;
  return r;
}

// `defects` confirmed defects (first `missed` accepted by the model) and
// `good` confirmed-good units (first `overkill` rejected by the model).
std::vector<ShadowRecord> trial(int defects, int missed, int good, int overkill) {
  std::vector<ShadowRecord> out;
  int id = 0;
  for (int i = 0; i < defects; ++i) {
    out.push_back(rec(id++, Verdict::kReject,
                      i < missed ? Verdict::kAccept : Verdict::kReject, Truth::kDefect));
  }
  for (int i = 0; i < good; ++i) {
    out.push_back(rec(id++, Verdict::kAccept,
                      i < overkill ? Verdict::kReject : Verdict::kAccept, Truth::kGood));
  }
  return out;
}

TEST(Concordance, AllAgreeAllGood) {
  std::vector<ShadowRecord> rs;
  for (int i = 0; i < 5; ++i) rs.push_back(rec(i, Verdict::kAccept, Verdict::kAccept, Truth::kGood));
  const auto c = concordance(rs);
  EXPECT_EQ(c.agreement_rate, 1.0);
  EXPECT_EQ(c.adjudicated_matrix, (metrics::ConfusionMatrix{0, 0, 0, 5}));
}

TEST(Concordance, EightOfTen) {
  std::vector<ShadowRecord> rs;
  for (int i = 0; i < 8; ++i) rs.push_back(rec(i, Verdict::kAccept, Verdict::kAccept, std::nullopt));
  rs.push_back(rec(8, Verdict::kAccept, Verdict::kReject, std::nullopt));
  rs.push_back(rec(9, Verdict::kReject, Verdict::kAccept, Truth::kDefect));
  const auto c = concordance(rs);
  EXPECT_DOUBLE_EQ(c.agreement_rate, 0.8);
  EXPECT_EQ(c.model_only_rejects, 1u);
  EXPECT_EQ(c.human_only_rejects, 1u);
  EXPECT_EQ(c.unknown_truth, 9u);
  EXPECT_EQ(c.adjudicated, 1u);
  EXPECT_EQ(c.adjudicated_matrix, (metrics::ConfusionMatrix{0, 1, 0, 0}));
}

TEST(Concordance, EmptyIsError) {
  EXPECT_THROW(concordance(std::vector<ShadowRecord>{}), DomainError);
}

TEST(Sufficiency, Examples) {
  auto s = sufficiency(trial(299, 0, 10, 0), make_config(0.95, 0.99, 0));
  EXPECT_TRUE(s.sufficient);
  EXPECT_EQ(s.required, 299u);

  s = sufficiency(trial(0, 0, 10, 0), make_config(0.95, 0.99, 0));
  EXPECT_FALSE(s.sufficient);
  EXPECT_EQ(s.confirmed_defects, 0u);
  EXPECT_EQ(s.required, 299u);

  s = sufficiency(trial(473, 0, 10, 0), make_config(0.95, 0.99, 1));
  EXPECT_TRUE(s.sufficient);
  EXPECT_EQ(s.required, 473u);
}

TEST(Gate, Proceed) {
  const auto g = gate(trial(299, 0, 100, 2), make_config(0.95, 0.99, 0));
  EXPECT_EQ(g.decision, GateOutcome::kProceed);
  ASSERT_EQ(g.reasons.size(), 3u);
  for (const auto& r : g.reasons) EXPECT_TRUE(r.satisfied) << r.criterion;
  EXPECT_DOUBLE_EQ(*g.overkill_rate, 0.02);
}

TEST(Gate, FalseNegativeHolds) {
  const auto g = gate(trial(299, 1, 100, 0), make_config(0.95, 0.99, 0));
  EXPECT_EQ(g.decision, GateOutcome::kHold);
  EXPECT_FALSE(g.reasons[1].satisfied);
  EXPECT_EQ(g.reasons[1].criterion, kCriterionFalseNegatives);
  EXPECT_EQ(g.reasons[1].detail.rfind(kReasonFalseNegatives, 0), 0u);
}

TEST(Gate, InsufficientHolds) {
  const auto g = gate(trial(100, 0, 100, 0), make_config(0.95, 0.99, 0));
  EXPECT_EQ(g.decision, GateOutcome::kHold);
  EXPECT_FALSE(g.reasons[0].satisfied);
  EXPECT_EQ(g.reasons[0].detail.rfind(kReasonInsufficientDefects, 0), 0u);
}

TEST(Gate, OverkillAboveLimitHolds) {
  const auto g = gate(trial(299, 0, 100, 6), make_config(0.95, 0.99, 0));
  EXPECT_EQ(g.decision, GateOutcome::kHold);
  EXPECT_FALSE(g.reasons[2].satisfied);
  EXPECT_EQ(g.reasons[2].detail.rfind(kReasonOverkillExceeded, 0), 0u);
}

TEST(Gate, NoConfirmedGoodHolds) {
  const auto g = gate(trial(299, 0, 0, 0), make_config(0.95, 0.99, 0));
  EXPECT_EQ(g.decision, GateOutcome::kHold);
  EXPECT_FALSE(g.overkill_rate.has_value());
  EXPECT_EQ(g.reasons[2].detail, kReasonOverkillUnknown);
}

TEST(Gate, EmptyRecordsHold) {
  EXPECT_EQ(gate(std::vector<ShadowRecord>{}, make_config(0.9, 0.9, 0)).decision,
            GateOutcome::kHold);
}

TEST(Gate, ReportDocument) {
  const auto cfg = make_config(0.95, 0.99, 0);
  const auto g = gate(trial(299, 0, 100, 2), cfg);
  const Json doc = gate_report(g, cfg);
  EXPECT_EQ(doc.at("decision"), "proceed");
  EXPECT_EQ(doc.at("reasons").size(), 3u);
  EXPECT_EQ(doc.at("config"), to_json(cfg));
  EXPECT_EQ(doc.at("defect_confusion").at("tp"), 299);
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(validate_config(make_config(0.95, 0.99, 0)));
  EXPECT_THROW(validate_config(make_config(1.0, 0.99, 0)), DomainError);
  EXPECT_THROW(validate_config(make_config(0.95, 0.99, 0, 1.5)), DomainError);
  auto c = make_config(0.95, 0.99, 0);
  c.window_end = c.window_start;
  EXPECT_THROW(validate_config(c), DomainError);
  EXPECT_THROW(gate(trial(1, 0, 1, 0), c), DomainError);
}

TEST(Config, JsonRoundTrip) {
  const auto c = make_config(0.9, 0.95, 2, 0.1);
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  Json bad = to_json(c);
  bad["allowed_failures"] = -1;
  EXPECT_THROW(config_from_json(bad), DomainError);
}

TEST(Records, JsonLinesRoundTrip) {
  auto rs = trial(3, 1, 3, 1);
  rs[0].model_score = 0.75;
  rs[1].adjudicated_truth.reset();
  const auto text = serialize_records(rs);
  EXPECT_EQ(parse_records(text), rs);
  EXPECT_NE(text.find("\"adjudicated_truth\":\"unknown\""), std::string::npos);
}

TEST(Records, Rejects) {
  EXPECT_THROW(parse_records("{\"unit_id\":\"\"}\n"), DomainError);
  EXPECT_THROW(parse_records("{\"unit_id\":\"a\",\"timestamp\":\"noon\","
                             "\"human_verdict\":\"accept\",\"model_verdict\":\"accept\"}\n"),
               DomainError);
  const auto rs = parse_records(
      "{\"unit_id\":\"a\",\"timestamp\":\"2026-01-01T00:00:00Z\","
      "\"human_verdict\":\"accept\",\"model_verdict\":\"reject\"}\n");
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_FALSE(rs[0].adjudicated_truth.has_value());
}

TEST(Simulate, Deterministic) {
  SimulationParams p{42, 500, 0.1, {0.95, 0.97}, {0.9, 0.99}};
  EXPECT_EQ(serialize_records(simulate_stream(p)), serialize_records(simulate_stream(p)));
  p.seed = 43;
  EXPECT_NE(serialize_records(simulate_stream(p)),
            serialize_records(simulate_stream(SimulationParams{42, 500, 0.1, {0.95, 0.97}, {0.9, 0.99}})));
}

TEST(Simulate, ZeroDefectRate) {
  const auto rs = simulate_stream({9, 20000, 0.0, {0.9, 0.9}, {1.0, 1.0}});
  std::size_t rejects = 0;
  for (const auto& r : rs) {
    EXPECT_EQ(r.adjudicated_truth, Truth::kGood);
    if (r.model_verdict == Verdict::kReject) ++rejects;
  }
  const double sigma = std::sqrt(20000 * 0.1 * 0.9);
  EXPECT_NEAR(static_cast<double>(rejects), 2000.0, 3 * sigma);
}

TEST(Simulate, DefectCountWithinThreeSigma) {
  const auto rs = simulate_stream({2026, 100000, 0.01, {1.0, 1.0}, {1.0, 1.0}});
  const auto n = std::count_if(rs.begin(), rs.end(), [](const ShadowRecord& r) {
    return r.adjudicated_truth == Truth::kDefect;
  });
  const double sigma = std::sqrt(100000 * 0.01 * 0.99);
  EXPECT_NEAR(static_cast<double>(n), 1000.0, 3 * sigma);
}

TEST(Simulate, Errors) {
  EXPECT_THROW(simulate_stream({1, 0, 0.1, {}, {}}), DomainError);
  EXPECT_THROW(simulate_stream({1, 10, 1.1, {}, {}}), DomainError);
}

TEST(ShadowProperty, GateMatchesOracleAndPerfectProfilesProceed) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rs = simulate_stream({seed, 3000, 0.15, {1.0, 1.0}, {1.0, 1.0}});
    const auto cfg = make_config(0.95, 0.99, 0);
    const auto g = gate(rs, cfg);
    EXPECT_EQ(concordance(rs).agreement_rate, 1.0);
    EXPECT_EQ(g.decision == GateOutcome::kProceed, oracle_gate_proceeds(rs, cfg));
    if (g.sufficiency.sufficient) {
      EXPECT_EQ(g.decision, GateOutcome::kProceed);
    }
  }
}

TEST(ShadowProperty, AgreementPermutationInvariant) {
  auto rs = simulate_stream({5, 800, 0.2, {0.8, 0.9}, {0.7, 0.95}});
  const double rate = concordance(rs).agreement_rate;
  Xoshiro256StarStar rng(1);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(rs.begin(), rs.end(), rng);
    EXPECT_EQ(concordance(rs).agreement_rate, rate);
  }
}

TEST(ShadowProperty, SufficiencyMonotoneInConfirmedDefects) {
  const auto cfg = make_config(0.9, 0.95, 1);
  auto rs = trial(0, 0, 5, 0);
  bool was_sufficient = false;
  for (int i = 0; i < 120; ++i) {
    rs.push_back(rec(1000 + i, Verdict::kReject, Verdict::kReject, Truth::kDefect));
    const bool now = sufficiency(rs, cfg).sufficient;
    EXPECT_TRUE(now || !was_sufficient);
    was_sufficient = now;
  }
  EXPECT_TRUE(was_sufficient);
}

}  // namespace
}  // namespace inspectqual::shadow
