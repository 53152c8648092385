// Copyright 2026 The SBLS Authors
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

// Command-line front end: score, validate, synth, explain.
// stdout carries the report so it can be piped; logs go to stderr.
// Exit codes: 0 success, 2 input/validation error, 1 internal error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbls/sbls.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

struct ScoreSource {
  std::string name;         // system label ("" for single-system runs)
  std::string schema_path;
  std::string label_path;
  std::vector<std::pair<std::string, std::string>> score_paths;  // attr, path
};

// "attr=path" or bare "path" (attribute inferred from the file header).
std::pair<std::string, std::string> split_score_arg(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) return {"", arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

// Overrides config defaults from the JSON file named by SBLS_CONFIG, if any.
// Explicit command-line flags still win: they are parsed afterwards.
void apply_env_config(sbls::EvaluationConfig& config) {
  const char* path = std::getenv("SBLS_CONFIG");
  if (path == nullptr || *path == '\0') return;
  nlohmann::json j =
      nlohmann::json::parse(sbls::read_file(path), nullptr, false);
  if (j.is_discarded())
    throw sbls::Error(sbls::errc::parse_failure,
                      "SBLS_CONFIG is not valid JSON", path);
  if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
  if (j.contains("beta")) config.beta = j["beta"].get<double>();
  if (j.contains("gamma")) config.gamma = j["gamma"].get<double>();
  if (j.contains("omega")) config.omega = j["omega"].get<double>();
  if (j.contains("min_subgroup_size"))
    config.min_subgroup_size = j["min_subgroup_size"].get<int>();
  if (j.contains("score_mode"))
    config.score_mode =
        sbls::score_mode_from_string(j["score_mode"].get<std::string>());
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Resolves a --system directory laid out like synth output: schema.json,
// labels.csv, scores_*.csv.
ScoreSource system_dir_source(const std::string& name, const std::string& dir,
                              const std::string& schema_override) {
  namespace fs = std::filesystem;
  ScoreSource src;
  src.name = name;
  src.schema_path = schema_override.empty()
                        ? (fs::path(dir) / "schema.json").string()
                        : schema_override;
  src.label_path = (fs::path(dir) / "labels.csv").string();
  std::vector<std::string> score_files;
  if (!fs::is_directory(dir))
    throw sbls::Error(sbls::errc::io_failure,
                      "system directory not found: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string fname = entry.path().filename().string();
    if (fname.rfind("scores_", 0) == 0 && entry.path().extension() == ".csv")
      score_files.push_back(entry.path().string());
  }
  std::sort(score_files.begin(), score_files.end());
  if (score_files.empty())
    throw sbls::Error(sbls::errc::io_failure,
                      "no scores_*.csv files in " + dir);
  for (const auto& p : score_files) src.score_paths.emplace_back("", p);
  return src;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw sbls::Error(sbls::errc::io_failure, "cannot write " + out_path);
  out << content;
}

int run_score(const std::vector<ScoreSource>& sources,
              const sbls::EvaluationConfig& config,
              const std::vector<std::string>& groups,
              const std::string& format, const std::string& out_path,
              const std::string& heatmap_path) {
  std::vector<sbls::SblsReport> reports;
  for (const auto& src : sources) {
    sbls::AttributeSchema schema = sbls::load_schema(src.schema_path);
    sbls::Dataset data =
        sbls::load_dataset(schema, src.score_paths, src.label_path);
    for (const auto& j : data.joined)
      std::cerr << "[sbls] " << (src.name.empty() ? "" : src.name + ": ")
                << "attribute " << j.attribute << ": joined N = " << j.size()
                << " (score-only " << j.stats.score_only << ", label-only "
                << j.stats.label_only << ", missing-label "
                << j.stats.missing_label << ")\n";
    sbls::EvaluationOptions options;
    options.config = config;
    options.grouping_fields = groups;
    options.system_name = src.name;
    reports.push_back(sbls::evaluate(data, options));
  }

  std::string rendered;
  if (format == "json") {
    if (reports.size() == 1) {
      rendered = sbls::emit_report(reports[0], sbls::ReportFormat::json);
    } else {
      nlohmann::json j;
      j["report_version"] = sbls::kReportVersion;
      j["systems"] = nlohmann::json::array();
      for (const auto& r : reports) j["systems"].push_back(sbls::report_to_json(r));
      rendered = j.dump(2) + "\n";
    }
  } else {
    if (reports.size() == 1) {
      rendered = sbls::render_text(reports[0]);
    } else {
      rendered = sbls::render_comparison_text(reports);
    }
  }
  write_output(rendered, out_path);

  if (!heatmap_path.empty()) {
    std::string csv;
    for (const auto& r : reports) csv += sbls::subgroup_heatmap_csv(r);
    write_output(csv, heatmap_path);
    std::cerr << "[sbls] subgroup heatmap table written to " << heatmap_path
              << "\n";
  }
  return kExitOk;
}

int run_validate(const ScoreSource& src, const sbls::EvaluationConfig& config,
                 const std::vector<std::string>& groups) {
  std::vector<std::string> findings;
  std::optional<sbls::AttributeSchema> schema;
  try {
    schema = sbls::load_schema(src.schema_path);
    std::cout << "schema: " << schema->size() << " attributes (";
    for (std::size_t i = 0; i < schema->size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << schema->at(i).name << ": " << schema->at(i).cardinality()
                << " classes";
    }
    std::cout << ")\n";
  } catch (const sbls::Error& e) {
    findings.push_back(e.what());
  }

  if (schema) {
    std::optional<sbls::LabelTable> labels;
    try {
      labels = sbls::load_label_table(src.label_path, *schema);
      std::cout << "labels: " << labels->size() << " rows, columns:";
      for (const auto& c : labels->columns) std::cout << " " << c;
      std::cout << "\n";
    } catch (const sbls::Error& e) {
      findings.push_back(e.what());
    }

    std::vector<sbls::JoinedAttribute> joined;
    for (const auto& [attr, path] : src.score_paths) {
      try {
        sbls::ScoreTable t = sbls::load_score_table(path, *schema, attr);
        if (labels) {
          sbls::JoinedAttribute j = sbls::join_attribute(t, *labels, *schema);
          std::cout << "attribute " << j.attribute << ": joined N = "
                    << j.size() << " (score-only " << j.stats.score_only
                    << ", label-only " << j.stats.label_only
                    << ", missing-label " << j.stats.missing_label << ")\n";
          auto present = j.present_classes();
          int n_present = 0;
          for (bool p : present) n_present += p ? 1 : 0;
          if (n_present < 2)
            findings.push_back("attribute " + j.attribute +
                               ": fewer than two classes present after join");
          joined.push_back(std::move(j));
        }
      } catch (const sbls::Error& e) {
        findings.push_back(e.what());
      }
    }

    if (labels) {
      std::vector<std::string> fields = groups;
      if (fields.empty())
        for (const auto& a : schema->attributes()) fields.push_back(a.name);
      try {
        std::cout << "subgroup cells (threshold " << config.min_subgroup_size
                  << "):\n";
        for (const auto& grouping : sbls::subgroup_grouping_plan(fields)) {
          for (const auto& cell : sbls::enumerate_subgroups(
                   *labels, grouping, config.min_subgroup_size)) {
            std::cout << "  " << cell.key.to_string() << ": n = " << cell.n();
            if (cell.below_min_size)
              std::cout << "  [warning: below threshold, will be excluded]";
            std::cout << "\n";
          }
        }
      } catch (const sbls::Error& e) {
        findings.push_back(e.what());
      }
    }
  }

  if (!findings.empty()) {
    std::cout << "findings:\n";
    for (const auto& f : findings) std::cout << "  - " << f << "\n";
    return kExitValidation;
  }
  std::cout << "OK\n";
  return kExitOk;
}

int run_synth(const std::string& spec_path, const std::string& out_dir,
              const std::optional<std::uint64_t>& seed_override) {
  sbls::SynthSpec spec = sbls::SynthSpec::load(spec_path);
  if (seed_override) spec.seed = *seed_override;
  sbls::SynthManifest manifest = sbls::generate(spec, out_dir);
  for (const auto& [path, digest] : manifest.digests)
    std::cout << digest << "  " << path << "\n";
  return kExitOk;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int run_explain(const std::string& report_path) {
  nlohmann::json j =
      nlohmann::json::parse(sbls::read_file(report_path), nullptr, false);
  if (j.is_discarded())
    throw sbls::Error(sbls::errc::parse_failure, "invalid JSON", report_path);
  sbls::SblsReport r = sbls::report_from_json(j);

  std::cout << "report: " << sbls::kToolName << " " << r.tool_version;
  if (!r.system_name.empty()) std::cout << ", system " << r.system_name;
  std::cout << "\n\n";

  std::cout << "composition: SBLS = alpha*P_attr + beta*P_assoc + "
               "gamma*P_subgroup\n";
  std::cout << "  = " << fmt6(r.config.alpha) << "*" << fmt6(r.p_attr) << " + "
            << fmt6(r.config.beta) << "*" << fmt6(r.p_assoc) << " + "
            << fmt6(r.config.gamma) << "*" << fmt6(r.p_subgroup) << " = "
            << fmt6(r.sbls) << "\n\n";

  std::cout << "P_attr = 1 - mean(per-attribute excess over chance):\n";
  double excess_sum = 0.0;
  for (const auto& a : r.attributes) {
    excess_sum += a.leakage.excess_over_chance;
    std::cout << "  " << a.alignment.attribute << ": "
              << (a.leakage.mode == sbls::ScoreMode::soft_scores
                      ? "mAUC* = "
                      : "balanced accuracy = ")
              << fmt6(a.alignment.m_auc_star)
              << " -> excess = " << fmt6(a.leakage.excess_over_chance) << " ("
              << sbls::to_string(a.band) << ")\n";
    std::cout << "    aligned columns:";
    for (int p : a.alignment.permutation) std::cout << " " << p;
    std::cout << "\n";
  }
  std::cout << "  mean excess = "
            << fmt6(excess_sum / static_cast<double>(r.attributes.size()))
            << " -> P_attr = " << fmt6(r.p_attr) << "\n\n";

  std::cout << "P_assoc = 1 - mean(normalized mutual information):\n";
  for (const auto& a : r.attributes)
    std::cout << "  " << a.alignment.attribute
              << ": I = " << fmt6(a.linkage.mutual_information)
              << " nats, NMI = " << fmt6(a.linkage.normalized_mi)
              << " (H_true " << fmt6(a.linkage.entropy_true) << ", H_pred "
              << fmt6(a.linkage.entropy_pred) << ")\n";
  std::cout << "  -> P_assoc = " << fmt6(r.p_assoc) << "\n\n";

  std::cout << "P_subgroup = omega*(1 - max L_g) + "
               "(1-omega)*min(1-L_g)/max(1-L_g), omega = "
            << fmt6(r.config.omega) << ":\n";
  const sbls::SubgroupReport* worst = nullptr;
  const sbls::SubgroupReport* best = nullptr;
  for (const auto& s : r.subgroups) {
    if (!s.included()) continue;
    if (worst == nullptr || *s.leakage > *worst->leakage) worst = &s;
    if (best == nullptr || *s.leakage < *best->leakage) best = &s;
  }
  if (worst != nullptr) {
    std::cout << "  worst subgroup: " << worst->key.to_string() << " (n = "
              << worst->n << "), L_g = " << fmt6(*worst->leakage) << "\n";
    std::cout << "  best subgroup:  " << best->key.to_string() << " (n = "
              << best->n << "), L_g = " << fmt6(*best->leakage) << "\n";
  } else {
    std::cout << "  no subgroup met the inclusion criteria\n";
  }
  std::cout << "  -> P_subgroup = " << fmt6(r.p_subgroup) << "\n";

  bool any_excluded = false;
  for (const auto& s : r.subgroups) any_excluded |= !s.included();
  if (any_excluded) {
    std::cout << "\nexcluded subgroups:\n";
    for (const auto& s : r.subgroups)
      if (!s.included())
        std::cout << "  " << s.key.to_string() << " (n = " << s.n
                  << "): " << s.exclusion_reason << "\n";
  }
  std::cout << "\ndisplayed values are rounded; the report stores full "
               "precision\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-biometric leakage scoring for de-identified speech"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(sbls::kToolName) + " " + sbls::kToolVersion);

  sbls::EvaluationConfig config;
  try {
    apply_env_config(config);
  } catch (const sbls::Error& e) {
    std::cerr << "[sbls] error: " << e.what() << "\n";
    return kExitValidation;
  }

  // --- score ---
  auto* score = app.add_subcommand(
      "score", "Evaluate attacker scores against labels and emit a report");
  std::string schema_path, label_path, format = "json", out_path, heatmap_path,
              groups_arg;
  std::vector<std::string> score_args, system_args;
  std::string mode_arg;
  score->add_option("--schema", schema_path, "Schema JSON path");
  score->add_option("--scores", score_args,
                    "Score CSV, as attr=path or path (repeatable)");
  score->add_option("--labels", label_path, "Label CSV path");
  score->add_option("--system", system_args,
                    "name=dir with schema.json/labels.csv/scores_*.csv "
                    "(repeatable; enables the comparison table)");
  score->add_option("--alpha", config.alpha, "Weight of P_attr");
  score->add_option("--beta", config.beta, "Weight of P_assoc");
  score->add_option("--gamma", config.gamma, "Weight of P_subgroup");
  score->add_option("--omega", config.omega,
                    "Worst-case/consistency balance in P_subgroup");
  score->add_option("--min-subgroup", config.min_subgroup_size,
                    "Smallest subgroup size included");
  score->add_option("--mode", mode_arg, "soft|hard score interpretation");
  score->add_option("--groups", groups_arg,
                    "Comma-separated grouping fields (default: all "
                    "schema attributes)");
  score->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  score->add_option("--out", out_path, "Write the report here (default stdout)");
  score->add_option("--heatmap-out", heatmap_path,
                    "Write the per-cell subgroup leakage CSV here");

  // --- validate ---
  auto* validate = app.add_subcommand(
      "validate", "Check inputs and report join/subgroup statistics");
  std::string v_schema, v_labels, v_groups;
  std::vector<std::string> v_scores;
  int v_min_subgroup = config.min_subgroup_size;
  validate->add_option("--schema", v_schema, "Schema JSON path")->required();
  validate->add_option("--scores", v_scores,
                       "Score CSV, as attr=path or path (repeatable)")
      ->required();
  validate->add_option("--labels", v_labels, "Label CSV path")->required();
  validate->add_option("--groups", v_groups, "Comma-separated grouping fields");
  validate->add_option("--min-subgroup", v_min_subgroup,
                       "Size threshold used for warnings");

  // --- synth ---
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic dataset from a spec file");
  std::string s_spec, s_out;
  std::uint64_t s_seed = 0;
  synth->add_option("--spec", s_spec, "Synthesis spec JSON")->required();
  synth->add_option("--out", s_out, "Output directory")->required();
  auto* seed_opt =
      synth->add_option("--seed", s_seed, "Override the spec's seed");

  // --- explain ---
  auto* explain = app.add_subcommand(
      "explain", "Trace every component of a stored JSON report");
  std::string e_report;
  explain->add_option("--report", e_report, "Report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      if (!mode_arg.empty())
        config.score_mode = sbls::score_mode_from_string(mode_arg);
      config.validate();
      std::vector<ScoreSource> sources;
      if (!system_args.empty()) {
        for (const auto& arg : system_args) {
          auto eq = arg.find('=');
          if (eq == std::string::npos)
            throw sbls::Error(sbls::errc::invalid_spec,
                              "--system expects name=dir, got '" + arg + "'");
          sources.push_back(system_dir_source(arg.substr(0, eq),
                                              arg.substr(eq + 1), schema_path));
        }
      } else {
        if (schema_path.empty() || label_path.empty() || score_args.empty())
          throw sbls::Error(
              sbls::errc::invalid_spec,
              "score needs --schema, --scores and --labels (or --system)");
        ScoreSource src;
        src.schema_path = schema_path;
        src.label_path = label_path;
        for (const auto& arg : score_args)
          src.score_paths.push_back(split_score_arg(arg));
        sources.push_back(std::move(src));
      }
      return run_score(sources, config, split_commas(groups_arg), format,
                       out_path, heatmap_path);
    }
    if (validate->parsed()) {
      sbls::EvaluationConfig vconfig = config;
      vconfig.min_subgroup_size = v_min_subgroup;
      ScoreSource src;
      src.schema_path = v_schema;
      src.label_path = v_labels;
      for (const auto& arg : v_scores)
        src.score_paths.push_back(split_score_arg(arg));
      return run_validate(src, vconfig, split_commas(v_groups));
    }
    if (synth->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = s_seed;
      return run_synth(s_spec, s_out, seed);
    }
    if (explain->parsed()) return run_explain(e_report);
  } catch (const sbls::Error& e) {
    std::cerr << "[sbls] error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "[sbls] internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
