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

#ifndef COLT_RANK_FILTER_H_
#define COLT_RANK_FILTER_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/taxonomy.h"

namespace colt {

inline constexpr std::string_view kQuerySlot = "<query>";
inline constexpr std::string_view kAnchorSlot = "<anchor>";

// Hypernymy probe sentences, each with one <query> and one <anchor> slot.
class TemplateSet {
 public:
  explicit TemplateSet(std::vector<std::string> templates);
  // The six is-a / such-as templates.
  static TemplateSet defaults();

  const std::vector<std::string>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

 private:
  std::vector<std::string> templates_;
};

bool template_has_slots(std::string_view tmpl);

// Substitutes both slots; "a/an" and "A/An" pick the article for the word
// that follows.
std::string fill_template(std::string_view tmpl, const Entity& query,
                          const Entity& anchor);

// Candidate key -> rank, 1 is best.
using RankMap = std::map<std::string, int>;

// Orders candidates for a (query, template) probe.
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual RankMap rank(const Entity& query, std::span<const Entity> candidates,
                       std::string_view tmpl) = 0;
  // One map per template; backends that batch override this.
  virtual std::vector<RankMap> rank_all(const Entity& query,
                                        std::span<const Entity> candidates,
                                        const TemplateSet& templates);
  virtual std::string describe() const = 0;
};

// Descending score order, ties broken by candidate key.
RankMap ranks_from_scores(std::span<const Entity> candidates,
                          std::span<const double> scores);

// 4 when the anchor is the query's head (last) token, 2 when either string is
// a token or substring of the other, else character-trigram Jaccard.
double lexical_hypernymy_score(const Entity& query, const Entity& anchor);

// Offline deterministic scorer; ignores the template wording.
class LexicalScorer : public ScorerBackend {
 public:
  RankMap rank(const Entity& query, std::span<const Entity> candidates,
               std::string_view tmpl) override;
  std::string describe() const override { return "lexical"; }
};

struct RemoteScorerConfig {
  std::string endpoint_url = "http://127.0.0.1:8008/rank";
  double timeout_seconds = 30.0;
  int retry_count = 2;
  double backoff_base_seconds = 0.5;
};

// Client for the masked-LM ranking service (POST /rank).
class RemoteMlmScorer : public ScorerBackend {
 public:
  explicit RemoteMlmScorer(RemoteScorerConfig config);

  RankMap rank(const Entity& query, std::span<const Entity> candidates,
               std::string_view tmpl) override;
  std::vector<RankMap> rank_all(const Entity& query,
                                std::span<const Entity> candidates,
                                const TemplateSet& templates) override;
  std::string describe() const override;

 private:
  RemoteScorerConfig config_;
};

// Validated ranking of `candidates` under one template. Requires a non-empty
// candidate list without the query; the result must be a bijection onto
// 1..n (MalformedResponse otherwise).
RankMap rank_under_template(const Entity& query,
                            std::span<const Entity> candidates,
                            std::string_view tmpl, ScorerBackend& backend);

struct ScoredCandidate {
  Entity candidate;
  double score;                     // mean reciprocal template rank
  int rank;                         // position by score, 1 is best
  std::vector<int> template_ranks;  // one per template
};

struct ScoreTable {
  Entity query;
  std::vector<ScoredCandidate> rows;  // best first

  const ScoredCandidate* find(const Entity& candidate) const;
};

// score(a) = (1/|M|) * sum over templates of 1 / rank_m(a).
ScoreTable ensemble_from_ranks(const Entity& query,
                               std::span<const Entity> candidates,
                               std::span<const RankMap> per_template);

ScoreTable ensemble_score(const Entity& query,
                          std::span<const Entity> candidates,
                          const TemplateSet& templates, ScorerBackend& backend);

enum class CandidatePool {
  kAllEntities,  // every entity of the set except the query
  kPlacedNodes,  // nodes currently in the taxonomy
};

struct FilterOptions {
  int top_k = 10;
  CandidatePool pool = CandidatePool::kAllEntities;
  // Detached entities go back to remaining; otherwise they are dropped.
  bool requeue = true;
};

struct FilterDecision {
  Edge edge;
  double score = 0.0;
  int rank = 0;
  std::size_t candidates = 0;
  bool kept = true;
  // Removed only because an ancestor added in the same layer was removed.
  bool cascaded = false;
};

struct FilterReport {
  std::vector<FilterDecision> decisions;
  bool skipped = false;  // scorer unavailable, layer kept unfiltered
  std::string skip_reason;
  std::vector<Entity> detached;

  std::vector<Edge> kept_edges() const;
  // Edges whose own rank exceeded top_k.
  std::vector<Edge> removed_edges() const;
};

struct FilterResult {
  Taxonomy taxonomy;
  EntityPool pool;
  FilterReport report;
};

// Keeps each new edge whose parent ranks within top_k of the child's
// ensemble score table and detaches the rest. Fails open when the scorer is
// unavailable.
FilterResult filter_layer(const Taxonomy& t, std::span<const Edge> new_edges,
                          const EntityPool& pool, const TemplateSet& templates,
                          ScorerBackend& backend,
                          const FilterOptions& options = {});

}  // namespace colt

#endif  // COLT_RANK_FILTER_H_
