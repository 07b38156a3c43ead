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

#include "inspectqual/monitor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "inspectqual/error.hpp"
#include "inspectqual/rng.hpp"

namespace inspectqual::monitor {
namespace {

std::vector<double> cut_points(std::vector<double> values, std::size_t bins) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::vector<double> edges;
  for (std::size_t k = 1; k < bins; ++k) {
    const std::size_t idx = k * n / bins;
    if (idx == 0 || idx >= n) continue;
    const double lo = values[idx - 1];
    const double hi = values[idx];
    const double edge = lo == hi ? hi : lo + (hi - lo) / 2;
    if (edges.empty() || edge > edges.back()) edges.push_back(edge);
  }
  return edges;
}

Json model_body(const ReferenceModel& m) {
  return Json{{"dim", m.dim},
              {"bins_per_dim", m.bins_per_dim},
              {"min_fit_size", m.min_fit_size},
              {"edges", m.edges},
              {"proportions", m.proportions},
              {"fitted_on", m.fitted_on}};
}

double parse_double(std::string_view token, std::size_t line_no) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
    token.remove_prefix(1);
  }
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) {
    token.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw DomainError("feature vectors: line " + std::to_string(line_no) +
                      ": not a number: '" + std::string(token) + "'");
  }
  return value;
}

void check_proportions(const std::vector<double>& p, std::size_t dim) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("reference model: proportion out of range in dimension " +
                        std::to_string(dim));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("reference model: proportions of dimension " +
                      std::to_string(dim) + " do not sum to 1");
  }
}

}  // namespace

std::size_t bin_index(std::span<const double> edges, double value) {
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), value) - edges.begin());
}

ReferenceModel fit_reference(std::span<const FeatureVector> vectors,
                             std::size_t bins_per_dim, std::size_t min_fit_size) {
  if (bins_per_dim == 0) throw DomainError("bins_per_dim must be at least 1");
  if (vectors.size() < min_fit_size || vectors.empty()) {
    throw DomainError("reference fit needs at least " +
                      std::to_string(std::max<std::size_t>(min_fit_size, 1)) +
                      " vectors, got " + std::to_string(vectors.size()));
  }
  const std::size_t dim = vectors.front().size();
  if (dim == 0) throw DomainError("feature vectors must have at least one value");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw DomainError("feature vector " + std::to_string(i) + " has dimension " +
                        std::to_string(vectors[i].size()) + ", expected " +
                        std::to_string(dim));
    }
    for (double v : vectors[i]) {
      if (!std::isfinite(v)) {
        throw DomainError("feature vector " + std::to_string(i) +
                          " contains a non-finite value");
      }
    }
  }

  ReferenceModel m;
  m.dim = dim;
  m.bins_per_dim = bins_per_dim;
  m.min_fit_size = min_fit_size;
  m.fitted_on = vectors.size();
  const double n = static_cast<double>(vectors.size());
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<double> column;
    column.reserve(vectors.size());
    for (const auto& v : vectors) column.push_back(v[d]);
    std::vector<double> edges = cut_points(column, bins_per_dim);
    std::vector<std::uint64_t> counts(edges.size() + 1, 0);
    for (double v : column) ++counts[bin_index(edges, v)];
    std::vector<double> props;
    props.reserve(counts.size());
    for (auto c : counts) props.push_back(static_cast<double>(c) / n);
    m.edges.push_back(std::move(edges));
    m.proportions.push_back(std::move(props));
  }
  m.digest = canonical_digest(model_body(m));
  return m;
}

Json to_json(const ReferenceModel& m) {
  Json doc = model_body(m);
  doc["digest"] = m.digest;
  return doc;
}

ReferenceModel reference_from_json(const Json& doc) {
  ReferenceModel m;
  try {
    m.dim = doc.at("dim").get<std::size_t>();
    m.bins_per_dim = doc.at("bins_per_dim").get<std::size_t>();
    m.min_fit_size = doc.at("min_fit_size").get<std::size_t>();
    m.edges = doc.at("edges").get<std::vector<std::vector<double>>>();
    m.proportions = doc.at("proportions").get<std::vector<std::vector<double>>>();
    m.fitted_on = doc.at("fitted_on").get<std::uint64_t>();
    m.digest = doc.at("digest").get<std::string>();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("reference model: ") + e.what());
  }
  if (m.dim == 0 || m.edges.size() != m.dim || m.proportions.size() != m.dim) {
    throw DomainError("reference model: dimension mismatch");
  }
  if (m.fitted_on < m.min_fit_size) {
    throw DomainError("reference model: fitted on fewer vectors than its minimum");
  }
  for (std::size_t d = 0; d < m.dim; ++d) {
    const auto& e = m.edges[d];
    if (std::adjacent_find(e.begin(), e.end(), std::greater_equal<>()) != e.end()) {
      throw DomainError("reference model: edges of dimension " + std::to_string(d) +
                        " are not strictly increasing");
    }
    if (m.proportions[d].size() != e.size() + 1) {
      throw DomainError("reference model: bin count mismatch in dimension " +
                        std::to_string(d));
    }
    check_proportions(m.proportions[d], d);
  }
  const std::string expected = canonical_digest(model_body(m));
  if (expected != m.digest) {
    throw DomainError("reference model: digest mismatch (content was modified)");
  }
  return m;
}

std::string_view to_string(DriftStatus s) {
  switch (s) {
    case DriftStatus::kOk:
      return "ok";
    case DriftStatus::kWarn:
      return "warn";
    case DriftStatus::kAlert:
      return "alert";
  }
  return "ok";
}

void validate_thresholds(const DriftThresholds& t) {
  if (!(t.warn >= 0.0 && t.warn <= t.alert)) {
    throw DomainError("drift thresholds require 0 <= warn <= alert");
  }
}

DriftStatus status_for(double max_psi, const DriftThresholds& t) {
  if (max_psi >= t.alert) return DriftStatus::kAlert;
  if (max_psi >= t.warn) return DriftStatus::kWarn;
  return DriftStatus::kOk;
}

double psi(std::span<const double> reference, std::span<const double> window) {
  if (reference.size() != window.size()) {
    throw DomainError("PSI needs proportion vectors of equal length");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < reference.size(); ++b) {
    const double p = std::max(reference[b], kProportionFloor);
    const double q = std::max(window[b], kProportionFloor);
    total += (q - p) * std::log(q / p);
  }
  return total;
}

DriftReport score_window(const ReferenceModel& model,
                         std::span<const FeatureVector> window,
                         const DriftThresholds& thresholds) {
  validate_thresholds(thresholds);
  if (window.empty()) throw DomainError("drift window is empty");
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (window[i].size() != model.dim) {
      throw DomainError("window vector " + std::to_string(i) + " has dimension " +
                        std::to_string(window[i].size()) + ", reference has " +
                        std::to_string(model.dim));
    }
  }

  DriftReport r;
  r.window_size = window.size();
  r.thresholds = thresholds;
  r.reference_digest = model.digest;
  const double n = static_cast<double>(window.size());
  for (std::size_t d = 0; d < model.dim; ++d) {
    std::vector<std::uint64_t> counts(model.proportions[d].size(), 0);
    for (const auto& v : window) ++counts[bin_index(model.edges[d], v[d])];
    std::vector<double> q;
    q.reserve(counts.size());
    for (auto c : counts) q.push_back(static_cast<double>(c) / n);
    r.per_dim_psi.push_back(psi(model.proportions[d], q));
  }
  r.max_psi = *std::max_element(r.per_dim_psi.begin(), r.per_dim_psi.end());
  r.status = status_for(r.max_psi, thresholds);
  return r;
}

Json to_json(const DriftReport& r) {
  return Json{{"per_dim_psi", r.per_dim_psi},
              {"max_psi", r.max_psi},
              {"status", to_string(r.status)},
              {"window_size", r.window_size},
              {"thresholds", {{"warn", r.thresholds.warn}, {"alert", r.thresholds.alert}}},
              {"proportion_floor", kProportionFloor},
              {"reference_digest", r.reference_digest}};
}

std::vector<FeatureVector> parse_vectors(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  std::vector<FeatureVector> out;
  if (text[first] == '[') {
    for (const Json& line : parse_json_lines(text, "feature vectors")) {
      if (!line.is_array()) {
        throw DomainError("feature vectors: each JSON line must be an array");
      }
      FeatureVector v;
      for (const Json& x : line) {
        if (!x.is_number()) throw DomainError("feature vectors: non-numeric value");
        v.push_back(x.get<double>());
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    FeatureVector v;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      v.push_back(parse_double(line.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string_view to_string(RetentionDecision d) {
  return d == RetentionDecision::kKeep ? "keep" : "drop";
}

RetentionDecision parse_retention_decision(std::string_view s) {
  if (s == "keep") return RetentionDecision::kKeep;
  if (s == "drop") return RetentionDecision::kDrop;
  throw DomainError("unknown retention decision '" + std::string(s) +
                    "' (expected keep|drop)");
}

std::uint64_t retention_hash(std::string_view unit_id, std::uint64_t seed) {
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) {
    seed_bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  }
  return fnv1a64(std::string_view(seed_bytes, 8), fnv1a64(unit_id));
}

RetentionDecision retention_decision(std::string_view unit_id, Verdict verdict,
                                     const RetentionPolicy& policy) {
  if (unit_id.empty()) throw DomainError("retention decision needs a unit_id");
  if (!(policy.nondefect_fraction >= 0.0 && policy.nondefect_fraction <= 1.0)) {
    throw DomainError("retention nondefect_fraction must lie in [0, 1]");
  }
  if (verdict == Verdict::kReject) return RetentionDecision::kKeep;
  if (policy.nondefect_fraction >= 1.0) return RetentionDecision::kKeep;
  // long double holds every 64-bit integer exactly on the supported targets.
  const long double threshold =
      static_cast<long double>(policy.nondefect_fraction) * 0x1.0p64L;
  const auto h = static_cast<long double>(retention_hash(unit_id, policy.seed));
  return h < threshold ? RetentionDecision::kKeep : RetentionDecision::kDrop;
}

Json to_json(const RetentionRecord& r) {
  return Json{{"unit_id", r.unit_id},
              {"verdict", to_string(r.verdict)},
              {"decision", to_string(r.decision)}};
}

RetentionRecord retention_record_from_json(const Json& doc) {
  try {
    RetentionRecord r;
    r.unit_id = doc.at("unit_id").get<std::string>();
    r.verdict = parse_verdict(doc.at("verdict").get<std::string>());
    r.decision = parse_retention_decision(doc.at("decision").get<std::string>());
    return r;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("retention record: ") + e.what());
  }
}

RetentionCounts count_decisions(std::span<const RetentionRecord> records) {
  RetentionCounts c;
  for (const auto& r : records) {
    const bool keep = r.decision == RetentionDecision::kKeep;
    if (r.verdict == Verdict::kReject) {
      ++(keep ? c.reject_kept : c.reject_dropped);
    } else {
      ++(keep ? c.accept_kept : c.accept_dropped);
    }
  }
  return c;
}

Json retention_manifest(std::span<const RetentionRecord> records) {
  const RetentionCounts c = count_decisions(records);
  Json decisions = Json::array();
  for (const auto& r : records) decisions.push_back(to_json(r));
  Json doc{{"counts",
            {{"reject_kept", c.reject_kept},
             {"reject_dropped", c.reject_dropped},
             {"accept_kept", c.accept_kept},
             {"accept_dropped", c.accept_dropped}}},
           {"total", records.size()},
           {"decisions", std::move(decisions)}};
  doc["digest"] = canonical_digest(doc);
  return doc;
}

}  // namespace inspectqual::monitor
