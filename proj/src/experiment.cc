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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "colt/harness.h"
#include "colt/outline.h"
#include "json.hpp"

namespace colt {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ExperimentCell::tag() const {
  return std::string(method == InductionMode::kCol ? "col" : "hf") +
         (filter ? "-filter" : "-nofilter");
}

ExperimentCell parse_cell(std::string_view text) {
  std::string s;
  for (char c : text) {
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  ExperimentCell cell;
  std::string method = s;
  std::string rest;
  if (auto p = s.find_first_of("+-/"); p != std::string::npos) {
    method = s.substr(0, p);
    rest = s.substr(p + 1);
  }
  if (method == "col") {
    cell.method = InductionMode::kCol;
  } else if (method == "hf") {
    cell.method = InductionMode::kHfOneShot;
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown cell '" + std::string(text) + "'");
  }
  if (rest == "filter") {
    cell.filter = true;
  } else if (!rest.empty() && rest != "nofilter") {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown cell '" + std::string(text) + "'");
  }
  return cell;
}

std::vector<ExperimentCell> ablation_cells() {
  return {{InductionMode::kHfOneShot, false},
          {InductionMode::kHfOneShot, true},
          {InductionMode::kCol, false},
          {InductionMode::kCol, true}};
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no datasets given");
  }
  if (cells.empty()) throw Error(ErrorCode::kInvalidConfig, "no cells given");
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
  if (shots < 0) throw Error(ErrorCode::kInvalidConfig, "shots must be >= 0");
  if (out_dir.empty()) throw Error(ErrorCode::kInvalidConfig, "out_dir is empty");
  induction.validate();
}

std::size_t ExperimentResult::failures() const {
  std::size_t n = 0;
  for (const auto& c : cells) {
    for (const auto& r : c.records) n += r.ok ? 0 : 1;
  }
  return n;
}

std::size_t ExperimentResult::records() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.records.size();
  return n;
}

int ExperimentResult::exit_code() const { return failures() == 0 ? 0 : 1; }

namespace {

std::string safe_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << text;
}

json surfaces(const std::vector<Entity>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(e.surface());
  return a;
}

json edges_json(const std::vector<Edge>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back({e.parent.surface(), e.child.surface()});
  return a;
}

json prf_json(const PRF& p, const SetCounts& c) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"predicted", c.predicted}, {"gold", c.gold}, {"overlap", c.overlap}};
}

json metrics_obj(const MetricsReport& m) {
  return {{"ancestor", prf_json(m.ancestor, m.ancestor_counts)},
          {"edge", prf_json(m.edge, m.edge_counts)},
          {"node", prf_json(m.node, m.node_counts)},
          {"taxonomies", m.taxonomies}};
}

json filter_obj(const FilterReport& f) {
  json decisions = json::array();
  for (const auto& d : f.decisions) {
    decisions.push_back({{"parent", d.edge.parent.surface()},
                         {"child", d.edge.child.surface()},
                         {"score", d.score},
                         {"rank", d.rank},
                         {"candidates", d.candidates},
                         {"kept", d.kept},
                         {"cascaded", d.cascaded}});
  }
  return {{"skipped", f.skipped}, {"skip_reason", f.skip_reason},
          {"decisions", std::move(decisions)}, {"detached", surfaces(f.detached)}};
}

json report_obj(const InductionReport& r) {
  json iters = json::array();
  for (const auto& it : r.iterations) {
    json j = {{"k", it.k},
              {"selected", surfaces(it.selected)},
              {"committed", edges_json(it.committed)},
              {"reply", it.reply},
              {"outline", it.outline},
              {"diagnostics", it.diagnostics}};
    j["filter"] = it.filter ? filter_obj(*it.filter) : json(nullptr);
    j["model_said_complete"] =
        it.model_said_complete ? json(*it.model_said_complete) : json(nullptr);
    iters.push_back(std::move(j));
  }
  return {{"termination", std::string(termination_name(r.termination))},
          {"error", r.error},
          {"final_outline", render_outline(r.final_taxonomy)},
          {"unplaced", surfaces(r.unplaced)},
          {"dropped", surfaces(r.dropped)},
          {"dropped_hallucinations", surfaces(r.dropped_hallucinations)},
          {"iterations", std::move(iters)}};
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

std::vector<std::vector<std::string>> ablation_cells_text(
    std::span<const AblationRow> rows) {
  std::vector<std::vector<std::string>> out;
  out.push_back({"Dataset", "CoL", "Filter", "P_e", "R_e", "F1_e", "P_a", "R_a",
                 "F1_a"});
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out.push_back({r.dataset, r.col ? "yes" : "no", r.filter ? "yes" : "no",
                   pct(m.edge.precision), pct(m.edge.recall), pct(m.edge.f1),
                   pct(m.ancestor.precision), pct(m.ancestor.recall),
                   pct(m.ancestor.f1)});
  }
  return out;
}

// Finds the replay script for one record and cell.
std::string find_transcript(const std::string& dir, const std::string& record,
                            const ExperimentCell& cell) {
  const std::string base = safe_name(record);
  const std::string method = cell.method == InductionMode::kCol ? "col" : "hf";
  for (const std::string& name : {base + "." + cell.tag() + ".ndjson",
                                  base + "." + method + ".ndjson",
                                  base + ".ndjson"}) {
    fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p.string();
  }
  throw Error(ErrorCode::kIoError,
              "no transcript for '" + record + "' (" + cell.tag() + ") in '" +
                  dir + "'");
}

struct Task {
  std::string dataset;
  const DatasetRecord* record;
};

}  // namespace

std::string metrics_to_json(const MetricsReport& m) {
  return metrics_obj(m).dump(2);
}

std::string report_to_json(const InductionReport& r) {
  return report_obj(r).dump(2);
}

std::string manifest_json(const ExperimentConfig& config,
                          const CellResult& cell) {
  json records = json::array();
  for (const auto& r : cell.records) {
    json j = {{"record", r.record}, {"dataset", r.dataset}, {"ok", r.ok},
              {"error", r.error}};
    j["metrics"] = r.metrics ? metrics_obj(*r.metrics) : json(nullptr);
    j["report"] = r.report ? report_obj(*r.report) : json(nullptr);
    records.push_back(std::move(j));
  }
  json datasets = json::array();
  for (const auto& d : config.datasets) datasets.push_back(stem_of(d));
  std::string backend =
      config.backend.kind == BackendKind::kHttp
          ? "http:" + config.backend.endpoint_url + " model=" + config.induction.model
          : "scripted";
  std::string scorer = config.scorer == ScorerKind::kLexical
                           ? "lexical"
                           : "remote:" + config.remote_scorer.endpoint_url;
  json m = {{"run_id", cell.run_id},
            {"method", cell.cell.method == InductionMode::kCol ? "col" : "hf"},
            {"filter", cell.cell.filter},
            {"shots", config.shots == 0 ? "zero" : "few"},
            {"demonstrations", config.shots},
            {"top_k", config.induction.top_k},
            {"max_iterations", config.induction.max_iterations},
            {"stall_limit", config.induction.stall_limit},
            {"strict_entity_set", config.induction.strict_entity_set},
            {"backend", backend},
            {"scorer", cell.cell.filter ? json(scorer) : json(nullptr)},
            {"datasets", std::move(datasets)},
            {"records", std::move(records)}};
  m["aggregate"] = cell.aggregate ? metrics_obj(*cell.aggregate) : json(nullptr);
  return m.dump(2) + "\n";
}

std::string ablation_tsv(std::span<const AblationRow> rows) {
  std::string out;
  for (const auto& line : ablation_cells_text(rows)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out += (i ? "\t" : "") + line[i];
    }
    out += "\n";
  }
  return out;
}

std::string ablation_text(std::span<const AblationRow> rows) {
  const auto table = ablation_cells_text(rows);
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  std::string out;
  for (const auto& line : table) {
    std::string row;
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::string cell = line[i];
      const std::size_t pad = width[i] - cell.size();
      row += i == 0 ? cell + std::string(pad, ' ') : std::string(pad, ' ') + cell;
      if (i + 1 < line.size()) row += "  ";
    }
    out += row + "\n";
  }
  return out;
}

std::string ablation_json(std::span<const AblationRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    arr.push_back({{"Dataset", r.dataset},
                   {"CoL", r.col},
                   {"Filter", r.filter},
                   {"P_e", m.edge.precision * 100.0},
                   {"R_e", m.edge.recall * 100.0},
                   {"F1_e", m.edge.f1 * 100.0},
                   {"P_a", m.ancestor.precision * 100.0},
                   {"R_a", m.ancestor.recall * 100.0},
                   {"F1_a", m.ancestor.f1 * 100.0},
                   {"records", m.taxonomies}});
  }
  json doc = {{"columns", {"Dataset", "CoL", "Filter", "P_e", "R_e", "F1_e",
                           "P_a", "R_a", "F1_a"}},
              {"rows", std::move(arr)}};
  return doc.dump(2) + "\n";
}

std::string case_study(const Taxonomy& gold, const Taxonomy& pred,
                       std::string_view title) {
  auto lines_of = [](const Taxonomy& t, const Taxonomy& other) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    const std::string text = render_outline(t);
    const auto nodes = t.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      char mark = ' ';
      if (i > 0) {
        auto p = t.parent_of(nodes[i]);
        bool shared = other.contains(nodes[i]) &&
                      other.parent_of(nodes[i]) == p;
        mark = shared ? ' ' : (other.contains(nodes[i]) ? '~' : '!');
      }
      out.push_back(std::string(1, mark) + " " + line);
    }
    return out;
  };
  const auto left = lines_of(gold, pred);
  const auto right = lines_of(pred, gold);
  std::size_t width = std::string("gold").size();
  for (const auto& l : left) width = std::max(width, l.size());
  std::string out;
  if (!title.empty()) out += std::string(title) + "\n";
  out += "gold" + std::string(width - 4, ' ') + " | predicted\n";
  const std::size_t n = std::max(left.size(), right.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string l = i < left.size() ? left[i] : "";
    std::string r = i < right.size() ? right[i] : "";
    std::string row = l + std::string(width - l.size(), ' ') + " | " + r;
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + "\n";
  }
  const MetricsReport m = evaluate(pred, gold);
  out += "edge F1 " + pct(m.edge.f1) + "  ancestor F1 " + pct(m.ancestor.f1) +
         "  node F1 " + pct(m.node.f1) + "\n";
  out += "marks: ! entity absent on the other side, ~ different parent\n";
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentOverrides& overrides) {
  config.validate();
  const bool scripted = overrides.backend == nullptr &&
                        config.backend.kind == BackendKind::kScripted;
  if (scripted && config.transcript_dir.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "scripted backend needs a transcript directory");
  }

  std::vector<std::pair<std::string, std::vector<DatasetRecord>>> data;
  for (const auto& path : config.datasets) {
    data.emplace_back(stem_of(path), load_dataset(path));
  }
  std::vector<DatasetRecord> demo_pool;
  if (!config.demos_path.empty()) {
    demo_pool = load_dataset(config.demos_path);
  } else if (config.shots > 0) {
    for (const auto& [_, recs] : data) {
      for (const auto& r : recs) {
        if (r.split == Split::kTrain) demo_pool.push_back(r);
      }
    }
  }

  std::unique_ptr<ScorerBackend> own_scorer;
  ScorerBackend* scorer = overrides.scorer;
  if (scorer == nullptr) {
    if (config.scorer == ScorerKind::kRemote) {
      own_scorer = std::make_unique<RemoteMlmScorer>(config.remote_scorer);
    } else {
      own_scorer = std::make_unique<LexicalScorer>();
    }
    scorer = own_scorer.get();
  }
  std::unique_ptr<ChatBackend> shared_backend;
  if (overrides.backend == nullptr && !scripted) {
    shared_backend = make_backend(config.backend);
  }

  std::vector<Task> tasks;
  for (const auto& [name, recs] : data) {
    for (const auto& r : recs) tasks.push_back({name, &r});
  }

  ExperimentResult result;
  result.out_dir = config.out_dir;
  const fs::path root_dir(config.out_dir);
  for (const auto& cell : config.cells) {
    CellResult cr;
    cr.cell = cell;
    cr.run_id = safe_name(config.name) + "-" + cell.tag();
    const fs::path run_dir = root_dir / cr.run_id;
    fs::create_directories(run_dir);
    const std::string started = config.timestamps ? utc_now() : "";

    std::vector<RecordResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        const Task& task = tasks[i];
        const DatasetRecord& rec = *task.record;
        RecordResult& out = results[i];
        out.record = rec.name;
        out.dataset = task.dataset;
        out.gold_outline = render_outline(rec.gold);
        try {
          InductionConfig ic = config.induction;
          ic.mode = cell.method;
          ic.filter_enabled = cell.filter;
          if (config.shots == 0) ic.rules = RuleSet::free_form();
          ic.demonstrations.clear();
          const std::size_t want =
              config.shots == 0 ? demo_pool.size()
                                : static_cast<std::size_t>(config.shots);
          for (const auto& d : demo_pool) {
            if (ic.demonstrations.size() >= want) break;
            if (d.name == rec.name) continue;
            ic.demonstrations.push_back(
                cell.method == InductionMode::kCol
                    ? demonstration_from_taxonomy(d.gold, d.entities, ic.rules)
                    : hf_demonstration_from_taxonomy(d.gold, d.entities,
                                                     ic.rules));
          }
          std::unique_ptr<ChatBackend> own;
          ChatBackend* inner = overrides.backend;
          if (inner == nullptr) inner = shared_backend.get();
          if (inner == nullptr) {
            own = ScriptedBackend::from_file(
                find_transcript(config.transcript_dir, rec.name, cell),
                config.backend.script_mode);
            inner = own.get();
          }
          RecordingBackend recorder(*inner);
          InductionReport report =
              induce(rec.entities, rec.root, ic, recorder, scorer);
          write_text(run_dir / "transcripts" / (safe_name(rec.name) + ".ndjson"),
                     transcript_to_ndjson(recorder.records()));
          out.metrics = evaluate(report.final_taxonomy, rec.gold);
          write_text(run_dir / "case_studies" / (safe_name(rec.name) + ".txt"),
                     case_study(rec.gold, report.final_taxonomy,
                                rec.name + " (" + cell.tag() + ")"));
          out.report = std::move(report);
          out.ok = true;
        } catch (const std::exception& e) {
          out.ok = false;
          out.error = e.what();
        }
      }
    };
    const int n = std::min<int>(config.workers, static_cast<int>(tasks.size()));
    if (n <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < n; ++i) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const RecordResult& a, const RecordResult& b) {
                       return std::tie(a.dataset, a.record) <
                              std::tie(b.dataset, b.record);
                     });
    cr.records = std::move(results);

    std::vector<MetricsReport> ok;
    for (const auto& r : cr.records) {
      if (r.metrics) ok.push_back(*r.metrics);
    }
    if (!ok.empty()) cr.aggregate = aggregate(ok, config.averaging);
    std::string manifest = manifest_json(config, cr);
    if (config.timestamps) {
      json j = json::parse(manifest);
      j["started_at"] = started;
      j["finished_at"] = utc_now();
      manifest = j.dump(2) + "\n";
    }
    cr.manifest_path = (run_dir / "manifest.json").string();
    write_text(cr.manifest_path, manifest);
    result.cells.push_back(std::move(cr));
  }

  for (const auto& [name, _] : data) {
    for (const auto& cr : result.cells) {
      std::vector<MetricsReport> ok;
      for (const auto& r : cr.records) {
        if (r.dataset == name && r.metrics) ok.push_back(*r.metrics);
      }
      if (ok.empty()) continue;
      result.ablation.push_back({name, cr.cell.method == InductionMode::kCol,
                                 cr.cell.filter,
                                 aggregate(ok, config.averaging)});
    }
  }
  const std::string base = safe_name(config.name) + "-ablation";
  write_text(root_dir / (base + ".json"), ablation_json(result.ablation));
  write_text(root_dir / (base + ".tsv"), ablation_tsv(result.ablation));
  write_text(root_dir / (base + ".txt"), ablation_text(result.ablation));
  return result;
}

}  // namespace colt
