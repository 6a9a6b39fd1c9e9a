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

#include "colt/rank_filter.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace colt {

namespace {

std::size_t count_occurrences(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string_view::npos;
       pos = s.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

bool starts_with_vowel(std::string_view word) {
  if (word.empty()) return false;
  char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

void resolve_article(std::string& s, std::string_view pattern,
                     std::string_view a, std::string_view an) {
  for (auto pos = s.find(pattern); pos != std::string::npos;
       pos = s.find(pattern, pos + 1)) {
    std::size_t next = pos + pattern.size();
    while (next < s.size() && s[next] == ' ') ++next;
    bool vowel = starts_with_vowel(std::string_view(s).substr(next));
    s.replace(pos, pattern.size(), vowel ? an : a);
  }
}

std::vector<std::string> tokens_of(const std::string& key) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : key) {
    if (c == ' ' || c == '-') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::set<std::string> trigrams(const std::string& s) {
  std::set<std::string> out;
  if (s.size() < 3) {
    out.insert(s);
    return out;
  }
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) out.insert(s.substr(i, 3));
  return out;
}

}  // namespace

bool template_has_slots(std::string_view tmpl) {
  return count_occurrences(tmpl, kQuerySlot) == 1 &&
         count_occurrences(tmpl, kAnchorSlot) == 1;
}

TemplateSet::TemplateSet(std::vector<std::string> templates)
    : templates_(std::move(templates)) {
  if (templates_.empty()) {
    throw Error(ErrorCode::kPrecondition, "template set is empty");
  }
  for (const auto& t : templates_) {
    if (!template_has_slots(t)) {
      throw Error(ErrorCode::kPrecondition,
                  "template needs exactly one <query> and one <anchor>: " + t);
    }
  }
}

TemplateSet TemplateSet::defaults() {
  return TemplateSet({
      "<query> is a/an <anchor>",
      "<query> is a kind of <anchor>",
      "<query> is a type of <anchor>",
      "<query> is an example of <anchor>",
      "<anchor> such as <query>",
      "A/An <anchor> such as <query>",
  });
}

std::string fill_template(std::string_view tmpl, const Entity& query,
                          const Entity& anchor) {
  std::string s(tmpl);
  replace_all(s, kQuerySlot, query.surface());
  replace_all(s, kAnchorSlot, anchor.surface());
  resolve_article(s, "A/An", "A", "An");
  resolve_article(s, "a/an", "a", "an");
  return s;
}

std::vector<RankMap> ScorerBackend::rank_all(const Entity& query,
                                             std::span<const Entity> candidates,
                                             const TemplateSet& templates) {
  std::vector<RankMap> out;
  out.reserve(templates.size());
  for (const auto& t : templates.templates()) {
    out.push_back(rank(query, candidates, t));
  }
  return out;
}

RankMap ranks_from_scores(std::span<const Entity> candidates,
                          std::span<const double> scores) {
  if (candidates.size() != scores.size()) {
    throw Error(ErrorCode::kPrecondition, "one score per candidate required");
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return candidates[a].key() < candidates[b].key();
  });
  RankMap out;
  for (std::size_t r = 0; r < order.size(); ++r) {
    out[candidates[order[r]].key()] = static_cast<int>(r + 1);
  }
  return out;
}

double lexical_hypernymy_score(const Entity& query, const Entity& anchor) {
  constexpr double kWeight = 2.0;
  const auto& q = query.key();
  const auto& a = anchor.key();
  auto q_tokens = tokens_of(q);
  if (!q_tokens.empty() && q_tokens.back() == a) return 2 * kWeight;
  auto a_tokens = tokens_of(a);
  bool token_hit =
      std::find(q_tokens.begin(), q_tokens.end(), a) != q_tokens.end() ||
      std::find(a_tokens.begin(), a_tokens.end(), q) != a_tokens.end();
  if (token_hit || q.find(a) != std::string::npos ||
      a.find(q) != std::string::npos) {
    return kWeight;
  }
  auto qg = trigrams(q);
  auto ag = trigrams(a);
  std::size_t common = 0;
  for (const auto& g : qg) common += ag.count(g);
  std::size_t uni = qg.size() + ag.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

RankMap LexicalScorer::rank(const Entity& query,
                            std::span<const Entity> candidates,
                            std::string_view /*tmpl*/) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    scores.push_back(lexical_hypernymy_score(query, c));
  }
  return ranks_from_scores(candidates, scores);
}

namespace {

void check_rank_inputs(const Entity& query, std::span<const Entity> candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kPrecondition, "candidate list is empty");
  }
  if (std::find(candidates.begin(), candidates.end(), query) !=
      candidates.end()) {
    throw Error(ErrorCode::kPrecondition,
                "query '" + query.key() + "' is among its own candidates",
                {query.key()});
  }
}

void check_bijection(const RankMap& ranks, std::span<const Entity> candidates,
                     std::string_view tmpl) {
  std::vector<bool> seen(candidates.size() + 1, false);
  bool ok = ranks.size() == candidates.size();
  for (const auto& c : candidates) {
    auto it = ranks.find(c.key());
    if (it == ranks.end() || it->second < 1 ||
        it->second > static_cast<int>(candidates.size()) || seen[it->second]) {
      ok = false;
      break;
    }
    seen[it->second] = true;
  }
  if (!ok) {
    throw Error(ErrorCode::kMalformedResponse,
                "ranking under '" + std::string(tmpl) +
                    "' is not a bijection onto 1.." +
                    std::to_string(candidates.size()));
  }
}

}  // namespace

RankMap rank_under_template(const Entity& query,
                            std::span<const Entity> candidates,
                            std::string_view tmpl, ScorerBackend& backend) {
  check_rank_inputs(query, candidates);
  RankMap ranks;
  try {
    ranks = backend.rank(query, candidates, tmpl);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kScorerUnavailable) throw;
    throw Error(ErrorCode::kScorerUnavailable,
                std::string(e.what()) + " [query '" + query.key() +
                    "', template '" + std::string(tmpl) + "']",
                {query.key()});
  }
  check_bijection(ranks, candidates, tmpl);
  return ranks;
}

const ScoredCandidate* ScoreTable::find(const Entity& candidate) const {
  for (const auto& row : rows) {
    if (row.candidate == candidate) return &row;
  }
  return nullptr;
}

ScoreTable ensemble_from_ranks(const Entity& query,
                               std::span<const Entity> candidates,
                               std::span<const RankMap> per_template) {
  if (per_template.empty()) {
    throw Error(ErrorCode::kPrecondition, "no template rankings to ensemble");
  }
  const double m = static_cast<double>(per_template.size());
  std::vector<double> scores;
  std::vector<std::vector<int>> template_ranks;
  for (const auto& c : candidates) {
    std::vector<int> ranks;
    for (const auto& rm : per_template) ranks.push_back(rm.at(c.key()));
    std::vector<int> order = ranks;
    std::sort(order.begin(), order.end(), std::greater<int>());
    double sum = 0.0;
    for (int r : order) sum += 1.0 / static_cast<double>(r);
    scores.push_back(sum / m);
    template_ranks.push_back(std::move(ranks));
  }
  RankMap final_ranks = ranks_from_scores(candidates, scores);

  ScoreTable table{query, {}};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    table.rows.push_back({candidates[i], scores[i],
                          final_ranks.at(candidates[i].key()),
                          std::move(template_ranks[i])});
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              return a.rank < b.rank;
            });
  return table;
}

ScoreTable ensemble_score(const Entity& query,
                          std::span<const Entity> candidates,
                          const TemplateSet& templates,
                          ScorerBackend& backend) {
  check_rank_inputs(query, candidates);
  std::vector<RankMap> per_template;
  try {
    per_template = backend.rank_all(query, candidates, templates);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kScorerUnavailable) throw;
    throw Error(ErrorCode::kScorerUnavailable,
                std::string(e.what()) + " [query '" + query.key() + "']",
                {query.key()});
  }
  if (per_template.size() != templates.size()) {
    throw Error(ErrorCode::kMalformedResponse,
                "scorer returned " + std::to_string(per_template.size()) +
                    " rankings for " + std::to_string(templates.size()) +
                    " templates");
  }
  for (std::size_t i = 0; i < per_template.size(); ++i) {
    check_bijection(per_template[i], candidates, templates.templates()[i]);
  }
  return ensemble_from_ranks(query, candidates, per_template);
}

std::vector<Edge> FilterReport::kept_edges() const {
  std::vector<Edge> out;
  for (const auto& d : decisions) {
    if (d.kept) out.push_back(d.edge);
  }
  return out;
}

std::vector<Edge> FilterReport::removed_edges() const {
  std::vector<Edge> out;
  for (const auto& d : decisions) {
    if (!d.kept && !d.cascaded) out.push_back(d.edge);
  }
  return out;
}

FilterResult filter_layer(const Taxonomy& t, std::span<const Edge> new_edges,
                          const EntityPool& pool, const TemplateSet& templates,
                          ScorerBackend& backend, const FilterOptions& options) {
  if (options.top_k < 1) {
    throw Error(ErrorCode::kPrecondition, "top_k must be positive");
  }
  std::unordered_set<std::string> new_children;
  for (const auto& e : new_edges) {
    if (!t.contains(e.child) || t.parent_of(e.child) != std::optional(e.parent)) {
      throw Error(ErrorCode::kPrecondition,
                  "new edge (" + e.parent.key() + ", " + e.child.key() +
                      ") is not in the taxonomy",
                  {e.parent.key(), e.child.key()});
    }
    new_children.insert(e.child.key());
  }

  const std::vector<Entity> base = options.pool == CandidatePool::kAllEntities
                                       ? pool.all()
                                       : t.nodes();

  FilterResult result{t, pool, {}};
  auto& report = result.report;
  std::unordered_map<std::string, std::size_t> decision_of;
  for (const auto& e : new_edges) {
    std::vector<Entity> candidates;
    candidates.reserve(base.size() + 1);
    for (const auto& c : base) {
      if (c != e.child) candidates.push_back(c);
    }
    if (std::find(candidates.begin(), candidates.end(), e.parent) ==
        candidates.end()) {
      candidates.push_back(e.parent);
    }
    ScoreTable table{e.child, {}};
    try {
      table = ensemble_score(e.child, candidates, templates, backend);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kScorerUnavailable) throw;
      FilterResult unfiltered{t, pool, {}};
      unfiltered.report.skipped = true;
      unfiltered.report.skip_reason = err.what();
      for (const auto& edge : new_edges) {
        unfiltered.report.decisions.push_back({edge, 0.0, 0, 0, true, false});
      }
      return unfiltered;
    }
    const ScoredCandidate* row = table.find(e.parent);
    FilterDecision d{e, row->score, row->rank, candidates.size(),
                     row->rank <= options.top_k, false};
    decision_of[e.child.key()] = report.decisions.size();
    report.decisions.push_back(std::move(d));
  }

  // Removing a child also removes whatever was hung below it in this layer.
  std::vector<Entity> detach;
  std::unordered_set<std::string> marked;
  for (const auto& d : report.decisions) {
    if (d.kept || marked.count(d.edge.child.key())) continue;
    std::vector<Entity> stack = {d.edge.child};
    while (!stack.empty()) {
      Entity v = stack.back();
      stack.pop_back();
      if (!marked.insert(v.key()).second) continue;
      if (!new_children.count(v.key())) {
        throw Error(ErrorCode::kNotALeaf,
                    "'" + v.key() + "' was placed earlier but sits below a "
                    "removed edge", {v.key()});
      }
      detach.push_back(v);
      for (const auto& c : t.children_of(v)) stack.push_back(c);
    }
  }
  std::stable_sort(detach.begin(), detach.end(),
                   [&](const Entity& a, const Entity& b) {
                     return t.depth_of(a) > t.depth_of(b);
                   });
  for (const auto& v : detach) {
    auto& d = report.decisions[decision_of.at(v.key())];
    if (d.kept) {
      d.kept = false;
      d.cascaded = true;
    }
    auto [next, child] =
        remove_edge_and_detach(result.taxonomy, {*result.taxonomy.parent_of(v), v});
    result.taxonomy = std::move(next);
    if (result.pool.in_set(child)) {
      if (options.requeue) {
        result.pool.requeue(child);
      } else {
        result.pool.drop(child);
      }
    }
    report.detached.push_back(child);
  }
  return result;
}

}  // namespace colt
