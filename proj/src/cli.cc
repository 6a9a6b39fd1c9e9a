// Copyright 2026 The colt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "colt/cli.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "colt/engine.h"
#include "colt/harness.h"
#include "colt/outline.h"

namespace colt {

namespace fs = std::filesystem;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitInvalid = 2;

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kIoError:
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kPrecondition:
    case ErrorCode::kRootNotInEntityList:
    case ErrorCode::kTargetTooLarge:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kNoRootLine:
    case ErrorCode::kEmptyEntity:
    case ErrorCode::kMultipleRoots:
    case ErrorCode::kCycleDetected:
    case ErrorCode::kDisconnectedNode:
    case ErrorCode::kDuplicateParent:
    case ErrorCode::kDuplicateEdge:
      return true;
    default:
      return false;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Dataset JSON (first or named record) or an outline text file.
Taxonomy load_taxonomy(const std::string& path, const std::string& record = "") {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".txt" || ext == ".outline" || ext == ".md") {
    return outline_to_taxonomy(parse_outline(slurp(path)).outline, true);
  }
  auto records = load_dataset(path);
  for (const auto& r : records) {
    if (record.empty() || r.name == record) return r.gold;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "no record '" + record + "' in '" + path + "'");
}

DatasetRecord pick_record(const std::string& path, const std::string& name) {
  auto records = load_dataset(path);
  for (auto& r : records) {
    if (name.empty() || r.name == name) return std::move(r);
  }
  throw Error(ErrorCode::kInvalidConfig,
              "no record '" + name + "' in '" + path + "'");
}

struct BackendOpts {
  std::string kind = "scripted";
  std::string transcript;
  std::string script_mode = "digest";
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout = 60.0;
  int retries = 3;

  void add_to(CLI::App* app) {
    app->add_option("--backend", kind, "chat backend")
        ->check(CLI::IsMember({"scripted", "http"}));
    app->add_option("--transcript", transcript, "NDJSON replay script");
    app->add_option("--script-mode", script_mode, "scripted reply matching")
        ->check(CLI::IsMember({"digest", "position"}));
    app->add_option("--endpoint", endpoint, "chat completions URL");
    app->add_option("--api-key-env", api_key_env, "variable holding the API key");
    app->add_option("--timeout", timeout, "request timeout in seconds");
    app->add_option("--retries", retries, "retries per request");
  }

  std::unique_ptr<ChatBackend> make() const {
    BackendConfig c;
    c.kind = kind == "http" ? BackendKind::kHttp : BackendKind::kScripted;
    c.transcript_path = transcript;
    c.script_mode = script_mode == "position" ? ScriptMode::kPosition
                                              : ScriptMode::kDigest;
    c.endpoint_url = endpoint;
    c.api_key_env = api_key_env;
    c.timeout_seconds = timeout;
    c.retry_count = retries;
    c.validate();
    return make_backend(c);
  }
};

struct ScorerOpts {
  std::string kind = "lexical";
  std::string url = RemoteScorerConfig{}.endpoint_url;

  void add_to(CLI::App* app) {
    app->add_option("--scorer", kind, "hypernymy scorer")
        ->check(CLI::IsMember({"lexical", "remote"}));
    app->add_option("--scorer-url", url, "ranking service URL");
  }

  std::unique_ptr<ScorerBackend> make() const {
    if (kind == "remote") {
      RemoteScorerConfig c;
      c.endpoint_url = url;
      return std::make_unique<RemoteMlmScorer>(c);
    }
    return std::make_unique<LexicalScorer>();
  }
};

void print_metrics(std::ostream& out, const MetricsReport& m) {
  auto row = [&](const char* name, const PRF& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-9s %7.4f %7.4f %7.4f\n", name,
                  p.precision, p.recall, p.f1);
    out << buf;
  };
  out << "          precision recall  f1\n";
  row("ancestor", m.ancestor);
  row("edge", m.edge);
  row("node", m.node);
}

std::string join(const std::vector<Entity>& es) {
  std::string s;
  for (const auto& e : es) s += (s.empty() ? "" : ", ") + e.surface();
  return s.empty() ? "-" : s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Layer-wise taxonomy induction and evaluation", "colt"};
  app.require_subcommand(1);

  // induce
  auto* induce_cmd = app.add_subcommand("induce", "induce one record");
  std::string dataset, record, method = "col", demos, record_to;
  int shots = 5;
  bool filter = false, strict = true, as_json = false;
  int top_k = 10, max_iter = 10, stall = 2;
  std::string model = InductionConfig{}.model;
  BackendOpts backend;
  ScorerOpts scorer;
  induce_cmd->add_option("--dataset", dataset, "dataset file")->required();
  induce_cmd->add_option("--record", record, "record name (default: first)");
  induce_cmd->add_option("--method", method, "col or hf")
      ->check(CLI::IsMember({"col", "hf"}));
  induce_cmd->add_option("--demos", demos, "demonstration dataset");
  induce_cmd->add_option("--shots", shots, "demonstrations to use");
  induce_cmd->add_flag("--filter,!--no-filter", filter, "ranking filter");
  induce_cmd->add_flag("--strict-entities,!--lenient-entities", strict,
                       "prune out-of-set entities");
  induce_cmd->add_option("--top-k", top_k, "filter cutoff");
  induce_cmd->add_option("--max-iterations", max_iter, "iteration budget");
  induce_cmd->add_option("--stall-limit", stall, "zero-progress iterations");
  induce_cmd->add_option("--model", model, "model name");
  induce_cmd->add_option("--record-to", record_to, "save replay script");
  induce_cmd->add_flag("--json", as_json, "print the report as JSON");
  backend.add_to(induce_cmd);
  scorer.add_to(induce_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score a prediction");
  std::string pred_path, gold_path;
  eval_cmd->add_option("pred", pred_path, "predicted taxonomy")->required();
  eval_cmd->add_option("gold", gold_path, "gold taxonomy")->required();
  eval_cmd->add_flag("--json", as_json, "print JSON");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "sample sub-taxonomies");
  std::vector<int> sizes;
  int repeats = 5, band_min = 0, band_max = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  sample_cmd->add_option("--dataset", dataset, "dataset file")->required();
  sample_cmd->add_option("--record", record, "record name");
  sample_cmd->add_option("--sizes", sizes, "target sizes")->delimiter(',');
  sample_cmd->add_option("--min", band_min, "band minimum");
  sample_cmd->add_option("--max", band_max, "band maximum");
  sample_cmd->add_option("--repeats", repeats, "samples per size");
  sample_cmd->add_option("--seed", seed, "base seed");
  sample_cmd->add_option("--out-dir", out_dir, "output directory")->required();

  // gen-demos
  auto* gen_cmd = app.add_subcommand("gen-demos", "generate demonstrations");
  std::string root, out_path;
  ZeroShotOptions zs;
  gen_cmd->add_option("--root", root, "root concept")->required();
  gen_cmd->add_option("--count", zs.count, "demonstrations");
  gen_cmd->add_option("--temperature", zs.temperature, "sampling temperature");
  gen_cmd->add_option("--resamples", zs.retry_budget, "resamples per demo");
  gen_cmd->add_option("--model", zs.model, "model name");
  gen_cmd->add_option("--out", out_path, "output dataset file")->required();
  backend.add_to(gen_cmd);

  // run
  auto* run_cmd = app.add_subcommand("run", "run an experiment");
  std::string config_path, transcript_dir;
  int workers = 0;
  bool timestamps = false;
  run_cmd->add_option("--config", config_path, "TOML or JSON config")->required();
  run_cmd->add_option("--out-dir", out_dir, "override output directory");
  run_cmd->add_option("--transcript-dir", transcript_dir, "override replay dir");
  run_cmd->add_option("--workers", workers, "override worker count");
  run_cmd->add_flag("--timestamps", timestamps, "record wall-clock times");

  // case-study
  auto* case_cmd = app.add_subcommand("case-study", "side-by-side outlines");
  std::string title;
  case_cmd->add_option("--gold", gold_path, "gold taxonomy")->required();
  case_cmd->add_option("--pred", pred_path, "predicted taxonomy")->required();
  case_cmd->add_option("--title", title, "heading");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*induce_cmd) {
      DatasetRecord rec = pick_record(dataset, record);
      InductionConfig ic;
      ic.mode = parse_induction_mode(method);
      ic.filter_enabled = filter;
      ic.strict_entity_set = strict;
      ic.top_k = top_k;
      ic.max_iterations = max_iter;
      ic.stall_limit = stall;
      ic.model = model;
      if (!demos.empty()) {
        for (const auto& d : load_dataset(demos)) {
          if (static_cast<int>(ic.demonstrations.size()) >= shots) break;
          if (d.name == rec.name) continue;
          ic.demonstrations.push_back(
              ic.mode == InductionMode::kCol
                  ? demonstration_from_taxonomy(d.gold, d.entities)
                  : hf_demonstration_from_taxonomy(d.gold, d.entities));
        }
      }
      auto chat = backend.make();
      auto sc = scorer.make();
      RecordingBackend recorder(*chat);
      InductionReport report = induce(rec.entities, rec.root, ic, recorder,
                                      filter ? sc.get() : nullptr);
      if (!record_to.empty()) recorder.save(record_to);
      const MetricsReport m = evaluate(report.final_taxonomy, rec.gold);
      if (as_json) {
        out << report_to_json(report) << "\n";
      } else {
        out << render_outline(report.final_taxonomy) << "\n\n";
        out << "termination: " << termination_name(report.termination) << "\n";
        out << "iterations: " << report.iterations.size() << "\n";
        out << "unplaced: " << join(report.unplaced) << "\n";
        out << "dropped: " << join(report.dropped) << "\n";
        out << "dropped hallucinations: " << join(report.dropped_hallucinations)
            << "\n";
        if (!report.error.empty()) out << "error: " << report.error << "\n";
        print_metrics(out, m);
      }
      return report.termination == Termination::kAborted ? kExitPartial : 0;
    }
    if (*eval_cmd) {
      const MetricsReport m =
          evaluate(load_taxonomy(pred_path), load_taxonomy(gold_path));
      if (as_json) {
        out << metrics_to_json(m) << "\n";
      } else {
        print_metrics(out, m);
      }
      return 0;
    }
    if (*sample_cmd) {
      DatasetRecord rec = pick_record(dataset, record);
      if (sizes.empty() && band_min == 0) {
        throw Error(ErrorCode::kInvalidConfig, "give --sizes or --min/--max");
      }
      fs::create_directories(out_dir);
      auto emit = [&](const Taxonomy& t, const std::string& name) {
        DatasetRecord r = record_from_taxonomy(name, t, rec.split);
        const std::string path = (fs::path(out_dir) / (name + ".json")).string();
        save_dataset(path, std::span<const DatasetRecord>(&r, 1));
        out << path << "\n";
      };
      for (int size : sizes) {
        for (int i = 0; i < repeats; ++i) {
          emit(sample_subtaxonomy(rec.gold, size, seed + i),
               rec.name + "-n" + std::to_string(size) + "-r" + std::to_string(i));
        }
      }
      if (band_min > 0) {
        const int hi = band_max > 0 ? band_max : band_min;
        for (int i = 0; i < repeats; ++i) {
          emit(sample_subtaxonomy_band(rec.gold, band_min, hi, seed + i),
               rec.name + "-band-r" + std::to_string(i));
        }
      }
      return 0;
    }
    if (*gen_cmd) {
      auto chat = backend.make();
      std::vector<std::string> diags;
      auto demos_out = generate_zero_shot_demos(Entity(root), zs, *chat, &diags);
      for (const auto& d : diags) err << "note: " << d << "\n";
      std::vector<DatasetRecord> records;
      for (std::size_t i = 0; i < demos_out.size(); ++i) {
        records.push_back(record_from_taxonomy(
            root + "-demo-" + std::to_string(i + 1), demos_out[i].taxonomy,
            Split::kTrain));
      }
      save_dataset(out_path, records);
      out << out_path << "\n";
      return 0;
    }
    if (*run_cmd) {
      ExperimentConfig c = load_experiment_config(config_path);
      if (!out_dir.empty()) c.out_dir = out_dir;
      if (!transcript_dir.empty()) c.transcript_dir = transcript_dir;
      if (workers > 0) c.workers = workers;
      if (timestamps) c.timestamps = true;
      ExperimentResult r = run_experiment(c);
      for (const auto& cell : r.cells) {
        out << cell.run_id << ": " << cell.manifest_path << "\n";
        for (const auto& rec : cell.records) {
          if (!rec.ok) err << cell.run_id << "/" << rec.record << ": " << rec.error << "\n";
        }
      }
      out << "\n" << ablation_text(r.ablation);
      if (r.failures() == r.records() && r.records() > 0) {
        err << "run failed: every record failed\n";
      }
      return r.exit_code();
    }
    if (*case_cmd) {
      out << case_study(load_taxonomy(gold_path), load_taxonomy(pred_path), title);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInvalid : kExitPartial;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace colt
