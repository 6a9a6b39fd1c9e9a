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

#ifndef COLT_ENGINE_H_
#define COLT_ENGINE_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/gateway.h"
#include "colt/prompts.h"
#include "colt/rank_filter.h"
#include "colt/taxonomy.h"

namespace colt {

enum class InductionMode { kHfOneShot, kCol };

std::string_view induction_mode_name(InductionMode mode);
InductionMode parse_induction_mode(std::string_view name);

enum class Termination {
  kPoolEmpty,
  kMaxIterations,
  kStalled,
  kModelDeclaredComplete,
  kAborted,  // a gateway error cut the session short
};

std::string_view termination_name(Termination t);

struct InductionConfig {
  InductionMode mode = InductionMode::kCol;
  RuleSet rules = RuleSet::full();
  std::vector<Demonstration> demonstrations;
  bool filter_enabled = false;
  int top_k = 10;
  CandidatePool candidate_pool = CandidatePool::kAllEntities;
  // Empty means the default template set.
  std::vector<std::string> templates;
  int max_iterations = 10;
  // Consecutive zero-commit iterations before giving up; 0 disables.
  int stall_limit = 2;
  // Prune entities outside the given set instead of keeping them.
  bool strict_entity_set = true;
  // Stop when the model answers "Yes." to the check prompt.
  bool honor_model_completion = false;
  std::string model = "gpt-4-1106-preview";
  double temperature = 0.0;
  int max_output_tokens = 4096;

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  std::vector<Entity> selected;  // accepted before filtering
  std::vector<Edge> committed;
  std::optional<FilterReport> filter;
  std::string reply;
  std::string outline;  // taxonomy after commit
  std::optional<bool> model_said_complete;
  std::vector<std::string> diagnostics;
};

struct InductionReport {
  explicit InductionReport(Taxonomy t) : final_taxonomy(std::move(t)) {}

  Taxonomy final_taxonomy;
  std::vector<Entity> unplaced;
  // Out-of-set names that did not survive into the result.
  std::vector<Entity> dropped_hallucinations;
  // In-set entities abandoned for good.
  std::vector<Entity> dropped;
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::kPoolEmpty;
  std::string error;
  ChatTranscript transcript;
};

// Called after every commit with the state at the iteration boundary.
using IterationObserver = std::function<void(
    const IterationRecord&, const Taxonomy&, const EntityPool&)>;

// One request, one outline. Gateway errors and NoRootLine propagate.
InductionReport induce_hf(std::span<const Entity> entities, const Entity& root,
                          const InductionConfig& config, ChatBackend& backend,
                          ScorerBackend* scorer = nullptr);

// Layer-by-layer dialogue with optional filtering after every layer. Gateway
// errors end the session with termination kAborted.
InductionReport induce_col(std::span<const Entity> entities, const Entity& root,
                           const InductionConfig& config, ChatBackend& backend,
                           ScorerBackend* scorer = nullptr,
                           const IterationObserver& observer = {});

// Dispatches on config.mode.
InductionReport induce(std::span<const Entity> entities, const Entity& root,
                       const InductionConfig& config, ChatBackend& backend,
                       ScorerBackend* scorer = nullptr);

struct ZeroShotOptions {
  int count = 5;
  RuleSet rules = RuleSet::free_form();
  double temperature = 0.7;
  // Extra attempts per sample before it is skipped.
  int retry_budget = 3;
  std::string model = "gpt-4-1106-preview";
  int max_output_tokens = 4096;
};

// Samples model-generated taxonomies under `root` and unrolls each into a
// layer-wise demonstration over its own node set. Throws InsufficientDemos.
std::vector<Demonstration> generate_zero_shot_demos(
    const Entity& root, const ZeroShotOptions& options, ChatBackend& backend,
    std::vector<std::string>* diagnostics = nullptr);

}  // namespace colt

#endif  // COLT_ENGINE_H_
