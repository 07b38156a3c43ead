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

#include "inspectqual/manifest.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "inspectqual/error.hpp"
#include "test_support.hpp"

namespace inspectqual::manifest {
namespace {

using ::inspectqual::testing::make_sheet;
using ::inspectqual::testing::random_sheet;
using ::inspectqual::testing::shuffled_dump;

std::vector<std::string> codes(const std::vector<Violation>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.code);
  return out;
}

TEST(ValidateSheet, FullyPopulatedIsValid) {
  EXPECT_TRUE(validate_sheet(make_sheet(30, 70)).empty());
}

TEST(ValidateSheet, CountMismatch) {
  auto s = make_sheet(30, 70);
  s.total_samples = 99;
  EXPECT_EQ(codes(validate_sheet(s)), std::vector<std::string>{code::kCountMismatch});
}

TEST(ValidateSheet, MissingId) {
  auto s = make_sheet(30, 70);
  s.dataset_id.clear();
  EXPECT_EQ(codes(validate_sheet(s)), std::vector<std::string>{code::kMissingId});
}

TEST(ValidateSheet, EmptySheetReportsEachProblemOnce) {
  const auto found = codes(validate_sheet(DatasetSpecSheet{}));
  for (const char* c :
       {code::kMissingId, code::kInvalidVersion, code::kMissingStorageLocation,
        code::kEmptyClassDistribution, code::kMissingAcquisition,
        code::kMissingDefectGeneration, code::kMissingLabelTypes,
        code::kMissingLabellingProcess, code::kMissingAnnotatorInstructions,
        code::kMissingBias, code::kMissingCreatedAt}) {
    EXPECT_EQ(std::count(found.begin(), found.end(), c), 1) << c;
  }
}

TEST(ValidateSheet, DefectClassDesignation) {
  auto s = make_sheet(30, 70);
  s.defect_classes = {};
  EXPECT_EQ(codes(validate_sheet(s)), std::vector<std::string>{code::kNoDefectClass});
  s.defect_classes = {"defect", "good"};
  EXPECT_EQ(codes(validate_sheet(s)), std::vector<std::string>{code::kNoNondefectClass});
  s.defect_classes = {"defect", "scratch"};
  EXPECT_EQ(codes(validate_sheet(s)),
            std::vector<std::string>{code::kUnknownDefectClass});
}

TEST(ValidateSheet, BiasAndTimestamp) {
  auto s = make_sheet(30, 70);
  s.bias.push_back({"glare", ""});
  s.created_at = "yesterday";
  const auto v = validate_sheet(s);
  ASSERT_EQ(codes(v), (std::vector<std::string>{code::kIncompleteBiasEntry,
                                                code::kInvalidCreatedAt}));
  EXPECT_EQ(v[0].field, "bias[2]");
}

TEST(ValidateSheet, DigestMismatch) {
  auto s = seal(make_sheet(30, 70));
  EXPECT_TRUE(validate_sheet(s).empty());
  s.total_samples = 101;
  s.class_distribution["good"] = 71;
  EXPECT_EQ(codes(validate_sheet(s)), std::vector<std::string>{code::kDigestMismatch});
}

TEST(CanonicalDigest, Examples) {
  const auto s = make_sheet(30, 70);
  const auto d = canonical_digest(s);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_TRUE(is_sha256_hex(d));
  auto bumped = s;
  bumped.version += 1;
  EXPECT_NE(canonical_digest(bumped), d);
  EXPECT_EQ(canonical_digest(seal(s)), d);
}

TEST(CanonicalDigest, InvalidSheetIsError) {
  auto s = make_sheet(30, 70);
  s.total_samples = 1;
  EXPECT_THROW(canonical_digest(s), DomainError);
}

TEST(CanonicalDigest, KeyOrderInSourceDoesNotMatter) {
  Xoshiro256StarStar rng(11);
  const auto s = make_sheet(30, 70);
  const auto d = canonical_digest(s);
  for (int i = 0; i < 20; ++i) {
    const auto text = shuffled_dump(to_json(s), rng);
    EXPECT_EQ(canonical_digest(sheet_from_json(parse_json(text, "sheet"))), d);
  }
}

TEST(SheetJson, RejectsUnknownKeysAndBadTypes) {
  Json doc = to_json(make_sheet(30, 70));
  doc["colour"] = "blue";
  EXPECT_THROW(sheet_from_json(doc), DomainError);
  doc = to_json(make_sheet(30, 70));
  doc["total_samples"] = -4;
  EXPECT_THROW(sheet_from_json(doc), DomainError);
  doc = to_json(make_sheet(30, 70));
  doc["version"] = "one";
  EXPECT_THROW(sheet_from_json(doc), DomainError);
}

TEST(SheetJson, MissingFieldsSurfaceAsViolations) {
  const auto s = sheet_from_json(Json::object());
  EXPECT_FALSE(validate_sheet(s).empty());
}

TEST(DiffSheets, Examples) {
  const auto s = make_sheet(50, 50);
  EXPECT_TRUE(diff_sheets(s, s).empty());

  auto more = s;
  more.total_samples = 120;
  const auto d = diff_sheets(s, more);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].field_path, "total_samples");
  EXPECT_EQ(d[0].kind, ChangeKind::kModified);
  EXPECT_EQ(d[0].old_value, Json(100));
  EXPECT_EQ(d[0].new_value, Json(120));
}

TEST(DiffSheets, InsertedBiasEntryIsOneAddition) {
  const auto s = make_sheet(30, 70);
  auto t = s;
  t.bias.insert(t.bias.begin(), BiasEntry{"seasonal resin lots", "sample all lots"});
  const auto d = diff_sheets(s, t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, ChangeKind::kAdded);
  EXPECT_EQ(d[0].field_path, "bias[0]");
  EXPECT_TRUE(d[0].old_value.is_null());

  const auto back = diff_sheets(t, s);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].kind, ChangeKind::kRemoved);
}

TEST(DiffSheets, NestedPaths) {
  const auto s = make_sheet(30, 70);
  auto t = s;
  t.acquisition["camera"] = "other";
  t.acquisition.erase("optics");
  const auto d = diff_sheets(s, t);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].field_path, "acquisition.camera");
  EXPECT_EQ(d[1].field_path, "acquisition.optics");
  EXPECT_EQ(d[1].kind, ChangeKind::kRemoved);
}

TEST(Composition, Examples) {
  const CompositionPolicy policy;
  auto v = check_composition(make_sheet(30, 70), policy);
  EXPECT_TRUE(v.pass);
  EXPECT_DOUBLE_EQ(v.defect_fraction, 0.30);

  v = check_composition(make_sheet(10, 90), policy);
  EXPECT_FALSE(v.pass);
  EXPECT_DOUBLE_EQ(v.defect_fraction, 0.10);

  v = check_composition(make_sheet(50, 50), policy);
  EXPECT_TRUE(v.pass);
  EXPECT_DOUBLE_EQ(v.defect_fraction, 0.50);

  v = check_composition(make_sheet(25, 75), policy);
  EXPECT_TRUE(v.pass);
}

TEST(Composition, MarginalCasesRequirement) {
  auto s = make_sheet(30, 70);
  s.labelling.label_types = {"good", "defect"};
  auto v = check_composition(s, {});
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.marginal_cases_declared);
  v = check_composition(s, {0.25, 0.5, false});
  EXPECT_TRUE(v.pass);
  s.labelling.label_types.push_back("Marginal");
  EXPECT_TRUE(check_composition(s, {}).pass);
}

TEST(Composition, Errors) {
  EXPECT_THROW(check_composition(make_sheet(0, 0), {}), DomainError);
  EXPECT_THROW(validate_policy({0.0, 0.5, true}), DomainError);
  EXPECT_THROW(validate_policy({0.6, 0.5, true}), DomainError);
  EXPECT_THROW(validate_policy({0.2, 1.0, true}), DomainError);
  EXPECT_THROW(evaluate_composition(5, 4, true, {}), DomainError);
}

TEST(ManifestProperty, RoundTripPreservesDigest) {
  Xoshiro256StarStar rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sheet(rng);
    ASSERT_TRUE(validate_sheet(s).empty());
    const auto text = canonical_json(to_json(seal(s)));
    const auto back = sheet_from_json(parse_json(text, "sheet"));
    EXPECT_EQ(back, seal(s));
    EXPECT_EQ(canonical_digest(back), canonical_digest(s));
  }
}

TEST(ManifestProperty, CompositionScaleInvariant) {
  Xoshiro256StarStar rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t d = rng() % 200;
    const std::uint64_t g = 1 + rng() % 400;
    const std::uint64_t k = 1 + rng() % 9;
    auto base = check_composition(make_sheet(d, g), {});
    auto scaled = check_composition(make_sheet(d * k, g * k), {});
    EXPECT_EQ(base.pass, scaled.pass) << d << " " << g << " x" << k;
    EXPECT_EQ(base.reasons, scaled.reasons);
  }
}

}  // namespace
}  // namespace inspectqual::manifest
