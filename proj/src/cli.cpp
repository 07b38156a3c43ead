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

// Subcommands are thin adapters: parse files, call one module operation,
// print its document. Reports are JSON by default; --format text renders
// the same content as "path: value" lines (and a table for gap reports).

#include "inspectqual/cli.hpp"

#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "inspectqual/audit.hpp"
#include "inspectqual/canonical.hpp"
#include "inspectqual/compliance.hpp"
#include "inspectqual/error.hpp"
#include "inspectqual/manifest.hpp"
#include "inspectqual/metrics.hpp"
#include "inspectqual/monitor.hpp"
#include "inspectqual/sampling.hpp"
#include "inspectqual/shadow.hpp"
#include "inspectqual/timestamp.hpp"
#include "inspectqual/tmv.hpp"

namespace inspectqual::cli {
namespace {

void flatten(const Json& value, const std::string& path, std::string& out) {
  if (value.is_object() && !value.empty()) {
    for (const auto& [k, v] : value.items()) {
      flatten(v, path.empty() ? k : path + "." + k, out);
    }
  } else if (value.is_array() && !value.empty()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten(value[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out += path;
    out += ": ";
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += '\n';
  }
}

std::string render_text(const Json& doc) {
  if (!doc.is_object() && !doc.is_array()) {
    return (doc.is_string() ? doc.get<std::string>() : doc.dump()) + "\n";
  }
  std::string out;
  flatten(doc, "", out);
  return out;
}

struct Output {
  std::ostream& out;
  std::string format = "json";

  void emit(const Json& doc) const {
    if (format == "text") {
      out << render_text(doc);
    } else {
      out << doc.dump(2) << '\n';
    }
  }
};

Json read_json_file(const std::string& path, std::string_view what) {
  return parse_json(read_file(path), what);
}

std::string one_line(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

bool env_strict() {
  const char* v = std::getenv("INSPECTQUAL_STRICT");
  return v != nullptr && std::string_view(v) == "1";
}

Json metrics_document(const metrics::ConfusionMatrix& cm) {
  return Json{{"counts", metrics::to_json(cm)},
              {"metrics", metrics::to_json(metrics::report(cm))}};
}

Json violations_json(const std::vector<manifest::Violation>& violations) {
  Json list = Json::array();
  for (const auto& v : violations) {
    list.push_back({{"code", v.code}, {"field", v.field}, {"message", v.message}});
  }
  return list;
}

manifest::DatasetSpecSheet load_sheet(const std::string& path) {
  return manifest::sheet_from_json(read_json_file(path, "dataset sheet"));
}

void write_or_print(const std::optional<std::string>& path, const std::string& data,
                    std::ostream& out) {
  if (path) {
    write_file(*path, data);
  } else {
    out << data;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qualification and lifecycle-compliance toolkit for deep-learning "
               "visual inspection",
               "inspectqual"};
  app.fallthrough();
  app.require_subcommand(1);
  Output output{out};
  app.add_option("--format", output.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::function<int()> action;

  // samplesize
  double ss_confidence = 0, ss_reliability = 0;
  std::uint64_t ss_failures = 0;
  std::uint64_t ss_max_n = sampling::kDefaultMaxSampleSize;
  auto* samplesize = app.add_subcommand("samplesize", "Required sample size for a plan");
  samplesize->add_option("--confidence", ss_confidence)->required();
  samplesize->add_option("--reliability", ss_reliability)->required();
  samplesize->add_option("--failures", ss_failures, "Allowed failures")
      ->capture_default_str();
  samplesize->add_option("--max-n", ss_max_n, "Hard cap on sample size")
      ->capture_default_str();
  samplesize->callback([&] {
    action = [&] {
      out << sampling::plan_size(ss_confidence, ss_reliability, ss_failures, ss_max_n)
          << '\n';
      return kExitOk;
    };
  });

  // metrics
  std::string metrics_pairs;
  auto* metrics_cmd = app.add_subcommand("metrics", "Imbalanced-classification metrics");
  metrics_cmd->add_option("--pairs", metrics_pairs,
                          "JSON lines with 'truth' and 'predicted'")
      ->required();
  metrics_cmd->callback([&] {
    action = [&] {
      std::vector<Truth> truth;
      std::vector<Verdict> predicted;
      for (const Json& line :
           parse_json_lines(read_file(metrics_pairs), "metric pairs")) {
        if (!line.is_object() || !line.contains("truth") ||
            !line.contains("predicted") || !line.at("truth").is_string() ||
            !line.at("predicted").is_string()) {
          throw DomainError("metric pairs: each line needs string 'truth' and "
                            "'predicted' fields");
        }
        truth.push_back(parse_truth(line.at("truth").get<std::string>()));
        predicted.push_back(parse_verdict(line.at("predicted").get<std::string>()));
      }
      output.emit(metrics_document(metrics::from_pairs(truth, predicted)));
      return kExitOk;
    };
  });

  // manifest
  auto* manifest_cmd = app.add_subcommand("manifest", "Dataset specification sheets");
  manifest_cmd->require_subcommand(1);
  std::string mf_sheet, mf_a, mf_b;
  std::optional<std::string> mf_seal_out;
  manifest::CompositionPolicy mf_policy;
  bool mf_no_marginal = false;

  auto* mf_validate = manifest_cmd->add_subcommand("validate", "Check sheet invariants");
  mf_validate->add_option("--sheet", mf_sheet)->required();
  mf_validate->callback([&] {
    action = [&] {
      const auto violations = manifest::validate_sheet(load_sheet(mf_sheet));
      output.emit(Json{{"valid", violations.empty()},
                       {"violations", violations_json(violations)}});
      return violations.empty() ? kExitOk : kExitCheckFailed;
    };
  });

  auto* mf_digest = manifest_cmd->add_subcommand("digest", "Canonical SHA-256 of a sheet");
  mf_digest->add_option("--sheet", mf_sheet)->required();
  mf_digest->add_option("--seal", mf_seal_out,
                        "Also write the sheet with content_digest filled in");
  mf_digest->callback([&] {
    action = [&] {
      const auto sheet = load_sheet(mf_sheet);
      const std::string digest = manifest::canonical_digest(sheet);
      if (mf_seal_out) {
        write_file(*mf_seal_out, canonical_json(manifest::to_json(manifest::seal(sheet))));
      }
      output.emit(Json{{"digest", digest}});
      return kExitOk;
    };
  });

  auto* mf_diff = manifest_cmd->add_subcommand("diff", "Field-level changes between sheets");
  mf_diff->add_option("--a", mf_a)->required();
  mf_diff->add_option("--b", mf_b)->required();
  mf_diff->callback([&] {
    action = [&] {
      const auto changes = manifest::diff_sheets(load_sheet(mf_a), load_sheet(mf_b));
      Json list = Json::array();
      for (const auto& c : changes) list.push_back(manifest::to_json(c));
      output.emit(Json{{"identical", changes.empty()}, {"changes", std::move(list)}});
      return kExitOk;
    };
  });

  auto* mf_comp = manifest_cmd->add_subcommand("composition",
                                               "Check defect fraction and marginal cases");
  mf_comp->add_option("--sheet", mf_sheet)->required();
  mf_comp->add_option("--min", mf_policy.min_defect_fraction)->capture_default_str();
  mf_comp->add_option("--max", mf_policy.max_defect_fraction)->capture_default_str();
  mf_comp->add_flag("--no-require-marginal", mf_no_marginal);
  mf_comp->callback([&] {
    action = [&] {
      mf_policy.require_marginal_cases = !mf_no_marginal;
      const auto v = manifest::check_composition(load_sheet(mf_sheet), mf_policy);
      output.emit(manifest::to_json(v));
      return v.pass ? kExitOk : kExitCheckFailed;
    };
  });

  // shadow
  auto* shadow_cmd = app.add_subcommand("shadow", "Blinded shadow trial");
  shadow_cmd->require_subcommand(1);
  shadow::SimulationParams sim;
  std::optional<std::string> sim_start, sim_out;
  std::string sh_records, sh_config;

  auto* sh_sim = shadow_cmd->add_subcommand("simulate", "Seeded synthetic record stream");
  sh_sim->add_option("--seed", sim.seed)->required();
  sh_sim->add_option("--units", sim.n_units)->required();
  sh_sim->add_option("--defect-rate", sim.defect_rate)->required();
  sh_sim->add_option("--model-sensitivity", sim.model.sensitivity)->capture_default_str();
  sh_sim->add_option("--model-specificity", sim.model.specificity)->capture_default_str();
  sh_sim->add_option("--human-sensitivity", sim.human.sensitivity)->capture_default_str();
  sh_sim->add_option("--human-specificity", sim.human.specificity)->capture_default_str();
  sh_sim->add_option("--interval-seconds", sim.interval_seconds)->capture_default_str();
  sh_sim->add_option("--start", sim_start, "RFC 3339 timestamp of the first unit");
  sh_sim->add_option("--out", sim_out, "Records file (default stdout)");
  sh_sim->callback([&] {
    action = [&] {
      if (sim_start) {
        sim.start_epoch_seconds = require_rfc3339(*sim_start, "--start").epoch_seconds;
      }
      const auto records = shadow::simulate_stream(sim);
      write_or_print(sim_out, shadow::serialize_records(records), out);
      return kExitOk;
    };
  });

  auto* sh_analyze = shadow_cmd->add_subcommand("analyze", "Concordance of human and model");
  sh_analyze->add_option("--records", sh_records)->required();
  sh_analyze->callback([&] {
    action = [&] {
      const auto records = shadow::parse_records(read_file(sh_records));
      const auto c = shadow::concordance(records);
      Json doc = shadow::to_json(c);
      if (c.adjudicated > 0) {
        doc["adjudicated_metrics"] =
            metrics::to_json(metrics::report(c.adjudicated_matrix));
      }
      output.emit(doc);
      return kExitOk;
    };
  });

  auto* sh_gate = shadow_cmd->add_subcommand("gate", "Decide progression to validation");
  sh_gate->add_option("--records", sh_records)->required();
  sh_gate->add_option("--config", sh_config)->required();
  sh_gate->callback([&] {
    action = [&] {
      const auto config =
          shadow::config_from_json(read_json_file(sh_config, "shadow trial config"));
      const auto records = shadow::parse_records(read_file(sh_records));
      const auto g = shadow::gate(records, config);
      output.emit(shadow::gate_report(g, config));
      return g.decision == shadow::GateOutcome::kProceed ? kExitOk : kExitCheckFailed;
    };
  });

  // tmv
  auto* tmv_cmd = app.add_subcommand("tmv", "Test method validation");
  tmv_cmd->require_subcommand(1);
  std::string tmv_protocol, tmv_sheet, tmv_samples, tmv_actor;
  std::optional<std::string> tmv_out, tmv_audit_payload;
  auto* tmv_run = tmv_cmd->add_subcommand("run", "Execute a validation run");
  tmv_run->add_option("--protocol", tmv_protocol)->required();
  tmv_run->add_option("--sheet", tmv_sheet, "Dataset sheet referenced by the protocol")
      ->required();
  tmv_run->add_option("--samples", tmv_samples, "JSON lines samples")->required();
  tmv_run->add_option("--out", tmv_out, "Write the canonical report here");
  tmv_run->add_option("--audit-payload", tmv_audit_payload,
                      "Write an audit payload referencing the report here");
  tmv_run->add_option("--actor", tmv_actor, "Actor recorded in the audit payload");
  tmv_run->callback([&] {
    action = [&] {
      const auto protocol =
          tmv::protocol_from_json(read_json_file(tmv_protocol, "tmv protocol"));
      const auto sheet = load_sheet(tmv_sheet);
      const auto samples = tmv::parse_samples(read_file(tmv_samples));
      const auto report = tmv::execute(protocol, sheet, samples);
      const Json doc = tmv::to_json(report);
      if (tmv_out) write_file(*tmv_out, canonical_json(doc));
      if (tmv_audit_payload) {
        if (tmv_actor.empty()) throw DomainError("--audit-payload needs --actor");
        write_file(*tmv_audit_payload,
                   canonical_json(tmv::report_to_audit(report, tmv_actor)));
      }
      output.emit(doc);
      return report.pass ? kExitOk : kExitCheckFailed;
    };
  });

  // monitor
  auto* monitor_cmd = app.add_subcommand("monitor", "Feature drift monitoring");
  monitor_cmd->require_subcommand(1);
  std::string mon_vectors, mon_model, mon_window;
  std::size_t mon_bins = monitor::kDefaultBinsPerDim;
  std::size_t mon_min_fit = monitor::kDefaultMinFitSize;
  std::optional<std::string> mon_out;
  monitor::DriftThresholds mon_thresholds;

  auto* mon_fit = monitor_cmd->add_subcommand("fit", "Fit a reference model");
  mon_fit->add_option("--vectors", mon_vectors, "JSON lines or CSV")->required();
  mon_fit->add_option("--bins", mon_bins)->capture_default_str();
  mon_fit->add_option("--min-fit", mon_min_fit)->capture_default_str();
  mon_fit->add_option("--out", mon_out, "Reference model file (default stdout)");
  mon_fit->callback([&] {
    action = [&] {
      const auto vectors = monitor::parse_vectors(read_file(mon_vectors));
      const auto model = monitor::fit_reference(vectors, mon_bins, mon_min_fit);
      const Json doc = monitor::to_json(model);
      if (mon_out) {
        write_file(*mon_out, canonical_json(doc));
        output.emit(Json{{"digest", model.digest}, {"path", *mon_out}});
      } else {
        output.emit(doc);
      }
      return kExitOk;
    };
  });

  auto* mon_score = monitor_cmd->add_subcommand("score", "Score a window against a reference");
  mon_score->add_option("--model", mon_model)->required();
  mon_score->add_option("--window", mon_window)->required();
  mon_score->add_option("--warn", mon_thresholds.warn)->capture_default_str();
  mon_score->add_option("--alert", mon_thresholds.alert)->capture_default_str();
  mon_score->callback([&] {
    action = [&] {
      const auto model =
          monitor::reference_from_json(read_json_file(mon_model, "reference model"));
      const auto window = monitor::parse_vectors(read_file(mon_window));
      const auto report = monitor::score_window(model, window, mon_thresholds);
      output.emit(monitor::to_json(report));
      return report.status == monitor::DriftStatus::kAlert ? kExitCheckFailed : kExitOk;
    };
  });

  // retain
  auto* retain_cmd = app.add_subcommand("retain", "Triage-based image retention");
  retain_cmd->require_subcommand(1);
  std::string rt_units, rt_decisions;
  monitor::RetentionPolicy rt_policy;
  std::optional<std::string> rt_out;

  auto* rt_decide = retain_cmd->add_subcommand("decide", "Keep/drop decision per unit");
  rt_decide->add_option("--units", rt_units, "JSON lines with 'unit_id' and 'verdict'")
      ->required();
  rt_decide->add_option("--fraction", rt_policy.nondefect_fraction,
                        "Fraction of accepted units to keep")
      ->required();
  rt_decide->add_option("--seed", rt_policy.seed)->required();
  rt_decide->add_option("--out", rt_out, "Decisions file (default stdout)");
  rt_decide->callback([&] {
    action = [&] {
      std::string lines;
      for (const Json& unit : parse_json_lines(read_file(rt_units), "retention units")) {
        if (!unit.is_object() || !unit.contains("unit_id") ||
            !unit.at("unit_id").is_string() || !unit.contains("verdict") ||
            !unit.at("verdict").is_string()) {
          throw DomainError("retention units: each line needs string 'unit_id' and "
                            "'verdict'");
        }
        monitor::RetentionRecord r;
        r.unit_id = unit.at("unit_id").get<std::string>();
        r.verdict = parse_verdict(unit.at("verdict").get<std::string>());
        r.decision = monitor::retention_decision(r.unit_id, r.verdict, rt_policy);
        lines += canonical_json(monitor::to_json(r));
      }
      write_or_print(rt_out, lines, out);
      return kExitOk;
    };
  });

  auto* rt_manifest = retain_cmd->add_subcommand("manifest", "Counts and digest of decisions");
  rt_manifest->add_option("--decisions", rt_decisions)->required();
  rt_manifest->add_option("--out", rt_out, "Also write the canonical manifest here");
  rt_manifest->callback([&] {
    action = [&] {
      std::vector<monitor::RetentionRecord> records;
      for (const Json& line :
           parse_json_lines(read_file(rt_decisions), "retention decisions")) {
        records.push_back(monitor::retention_record_from_json(line));
      }
      const Json doc = monitor::retention_manifest(records);
      if (rt_out) write_file(*rt_out, canonical_json(doc));
      output.emit(doc);
      return kExitOk;
    };
  });

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Hash-chained quality records");
  audit_cmd->require_subcommand(1);
  std::string au_log, au_actor, au_action;
  std::optional<std::string> au_payload, au_payload_digest, au_payload_dir, au_timestamp;

  auto* au_append = audit_cmd->add_subcommand("append", "Append one entry");
  au_append->add_option("--log", au_log)->required();
  au_append->add_option("--actor", au_actor)->required();
  au_append->add_option("--action", au_action)->required();
  auto* payload_opt = au_append->add_option("--payload", au_payload, "Payload file");
  auto* digest_opt =
      au_append->add_option("--payload-digest", au_payload_digest, "Precomputed digest");
  payload_opt->excludes(digest_opt);
  au_append->add_option("--payload-dir", au_payload_dir,
                        "Content-addressed payload store (default <log>.payloads)");
  au_append->add_option("--timestamp", au_timestamp, "RFC 3339 (default: now)");
  au_append->callback([&] {
    action = [&] {
      if (!au_payload && !au_payload_digest) {
        throw DomainError("audit append needs --payload or --payload-digest");
      }
      std::vector<audit::AuditEntry> entries;
      if (std::filesystem::exists(au_log)) {
        const std::string text = read_file(au_log);
        const auto check = audit::verify_log_text(text);
        if (!check.ok()) {
          throw DomainError("refusing to append to a broken log (bad_index " +
                            std::to_string(*check.bad_index) + ")");
        }
        entries = audit::parse_log(text);
      }
      std::string digest;
      if (au_payload) {
        const std::filesystem::path dir =
            au_payload_dir ? std::filesystem::path(*au_payload_dir)
                           : std::filesystem::path(au_log + ".payloads");
        digest = audit::store_payload(dir, read_file(*au_payload));
      } else {
        digest = *au_payload_digest;
      }
      audit::AuditLog log(std::move(entries));
      const auto& entry = log.append(au_actor, au_action, digest,
                                     au_timestamp ? *au_timestamp : now_rfc3339());
      write_file(au_log, audit::serialize_log(log.entries()));
      output.emit(audit::to_json(entry));
      return kExitOk;
    };
  });

  auto* au_verify = audit_cmd->add_subcommand("verify", "Verify the hash chain");
  au_verify->add_option("--log", au_log)->required();
  au_verify->callback([&] {
    action = [&] {
      const std::string text = read_file(au_log);
      const auto result = audit::verify_log_text(text);
      if (result.ok()) {
        output.emit(Json{{"ok", true}, {"entries", audit::parse_log(text).size()}});
        return kExitOk;
      }
      output.emit(Json{{"ok", false},
                       {"bad_index", *result.bad_index},
                       {"reason", result.reason}});
      return kExitCheckFailed;
    };
  });

  // comply
  auto* comply_cmd = app.add_subcommand("comply", "AI Act requirement gap assessment");
  comply_cmd->require_subcommand(1);
  std::string cp_state;
  bool cp_strict = false;
  auto* cp_assess = comply_cmd->add_subcommand("assess", "Assess evidence against requirements");
  cp_assess->add_option("--state", cp_state, "Project state JSON")->required();
  cp_assess->add_flag("--strict", cp_strict,
                      "Resolve every reference (also INSPECTQUAL_STRICT=1)");
  cp_assess->callback([&] {
    action = [&] {
      compliance::AssessOptions opts;
      opts.strict = cp_strict || env_strict();
      opts.base_dir = std::filesystem::path(cp_state).parent_path();
      const auto state =
          compliance::state_from_json(read_json_file(cp_state, "project state"));
      const auto report = compliance::assess(state, opts);
      if (output.format == "text") {
        out << compliance::render_table(report);
      } else {
        output.emit(compliance::to_json(report));
      }
      return report.all_satisfied() ? kExitOk : kExitCheckFailed;
    };
  });

  auto* cp_rows = comply_cmd->add_subcommand("requirements", "List built-in requirement rows");
  cp_rows->callback([&] {
    action = [&] {
      Json rows = Json::array();
      for (const auto& row : compliance::builtin_requirements()) {
        rows.push_back(compliance::to_json(row));
      }
      output.emit(rows);
      return kExitOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "inspectqual: usage error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  if (!action) {
    err << "inspectqual: usage error: no subcommand given\n";
    return kExitUsage;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    err << "inspectqual: error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }
}

}  // namespace inspectqual::cli
