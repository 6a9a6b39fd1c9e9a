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

#ifndef COLT_HARNESS_H_
#define COLT_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/engine.h"
#include "colt/gateway.h"
#include "colt/metrics.h"
#include "colt/rank_filter.h"
#include "colt/taxonomy.h"

namespace colt {

enum class Split { kTrain, kDev, kTest };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct DatasetRecord {
  std::string name;
  Entity root;
  std::vector<Entity> entities;
  Taxonomy gold;
  Split split = Split::kTest;
};

// Validates the record: gold root is `root` and gold nodes equal `entities`.
// Throws InvariantViolation.
DatasetRecord make_record(std::string name, const Entity& root,
                          std::vector<Entity> entities,
                          std::span<const Edge> edges, Split split);
DatasetRecord record_from_taxonomy(std::string name, const Taxonomy& t,
                                   Split split = Split::kTest);

// Accepts one record object, an array of them, {"records": [...]}, or one
// record per line (JSONL). `source` labels diagnostics.
std::vector<DatasetRecord> parse_dataset(std::string_view text,
                                         std::string_view source = "<input>");
// Dispatches on extension: .tsv/.txt edge lists, everything else JSON.
std::vector<DatasetRecord> load_dataset(const std::string& path);

std::string record_to_json(const DatasetRecord& r);
std::string dataset_to_json(std::span<const DatasetRecord> records);
void save_dataset(const std::string& path,
                  std::span<const DatasetRecord> records);

// parent<TAB>child lines; '#' comments and blank lines skipped. The root is
// the single node without a parent.
DatasetRecord record_from_edge_list(std::string_view text, std::string name,
                                    Split split = Split::kTest);

// Connected, root-anchored subtree of exactly `target_size` nodes grown by
// uniform choice over frontier edges. Throws TargetTooLarge.
Taxonomy sample_subtaxonomy(const Taxonomy& gold, int target_size,
                            std::uint64_t seed);
// Size drawn uniformly from [min_size, max_size] clipped to the tree size.
Taxonomy sample_subtaxonomy_band(const Taxonomy& gold, int min_size,
                                 int max_size, std::uint64_t seed);

// One configuration of the method matrix.
struct ExperimentCell {
  InductionMode method = InductionMode::kCol;
  bool filter = false;

  std::string tag() const;  // "col-filter", "hf-nofilter", ...
  friend bool operator==(const ExperimentCell&, const ExperimentCell&) = default;
};

ExperimentCell parse_cell(std::string_view text);  // "col", "hf+filter", ...
std::vector<ExperimentCell> ablation_cells();

enum class ScorerKind { kLexical, kRemote };

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::string> datasets;
  // Demonstration source; the datasets' own train records when empty.
  std::string demos_path;
  int shots = 5;  // 0 selects model-generated demonstrations (demos_path)
  std::vector<ExperimentCell> cells = {ExperimentCell{}};
  InductionConfig induction;
  BackendConfig backend;
  // Scripted replay: <record>.<cell>.ndjson, <record>.<method>.ndjson or
  // <record>.ndjson in this directory.
  std::string transcript_dir;
  ScorerKind scorer = ScorerKind::kLexical;
  RemoteScorerConfig remote_scorer;
  Averaging averaging = Averaging::kMacro;
  std::string out_dir = "runs";
  int workers = 4;
  bool timestamps = false;

  void validate() const;
};

// TOML or JSON by extension; relative paths resolve against the file's
// directory. Throws InvalidConfig or ParseError.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::string_view text, bool toml,
                                         const std::string& base_dir = ".");

struct RecordResult {
  std::string record;
  std::string dataset;
  bool ok = false;
  std::string error;
  std::optional<MetricsReport> metrics;
  std::optional<InductionReport> report;
  std::string gold_outline;
};

struct CellResult {
  ExperimentCell cell;
  std::string run_id;
  std::string manifest_path;
  std::vector<RecordResult> records;  // sorted by dataset then record name
  std::optional<MetricsReport> aggregate;
};

struct AblationRow {
  std::string dataset;
  bool col = false;
  bool filter = false;
  MetricsReport metrics;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<AblationRow> ablation;
  std::string out_dir;

  std::size_t failures() const;
  std::size_t records() const;
  // 0 when every record succeeded, 1 otherwise.
  int exit_code() const;
};

// Optional stand-ins for the configured chat backend and scorer.
struct ExperimentOverrides {
  ChatBackend* backend = nullptr;
  ScorerBackend* scorer = nullptr;
};

// Runs every cell over every record, writes manifests, transcripts,
// case-study dumps and the ablation table under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentOverrides& overrides = {});

std::string manifest_json(const ExperimentConfig& config,
                          const CellResult& cell);
std::string report_to_json(const InductionReport& report);
std::string metrics_to_json(const MetricsReport& m);

// Dataset, CoL, Filter, then edge and ancestor P/R/F1 in percent.
std::string ablation_tsv(std::span<const AblationRow> rows);
std::string ablation_text(std::span<const AblationRow> rows);
std::string ablation_json(std::span<const AblationRow> rows);

// Gold and predicted outlines side by side with per-line edge marks.
std::string case_study(const Taxonomy& gold, const Taxonomy& pred,
                       std::string_view title = {});

}  // namespace colt

#endif  // COLT_HARNESS_H_
