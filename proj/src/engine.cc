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

#include "colt/engine.h"

#include <algorithm>
#include <utility>

#include "colt/outline.h"

namespace colt {

std::string_view induction_mode_name(InductionMode mode) {
  return mode == InductionMode::kCol ? "col" : "hf-oneshot";
}

InductionMode parse_induction_mode(std::string_view name) {
  if (name == "col" || name == "CoL") return InductionMode::kCol;
  if (name == "hf-oneshot" || name == "hf" || name == "HF") {
    return InductionMode::kHfOneShot;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown induction mode '" + std::string(name) + "'");
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::kPoolEmpty: return "pool-empty";
    case Termination::kMaxIterations: return "max-iterations";
    case Termination::kStalled: return "stalled";
    case Termination::kModelDeclaredComplete:
      return "model-declared-complete-early";
    case Termination::kAborted: return "aborted";
  }
  return "unknown";
}

void InductionConfig::validate() const {
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_iterations must be >= 1");
  }
  if (stall_limit < 0) {
    throw Error(ErrorCode::kInvalidConfig, "stall_limit must be >= 0");
  }
  if (top_k < 1) throw Error(ErrorCode::kInvalidConfig, "top_k must be >= 1");
  if (temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be in [0, 2]");
  }
  if (max_output_tokens < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_output_tokens must be >= 1");
  }
}

namespace {

bool is_gateway_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kTimeout:
    case ErrorCode::kServerError:
    case ErrorCode::kScriptExhausted:
    case ErrorCode::kMalformedResponse:
      return true;
    default:
      return false;
  }
}

struct Session {
  Session(std::span<const Entity> entities, const Entity& root,
          const InductionConfig& cfg)
      : config(cfg), pool(entities), taxonomy(checked_root(root)) {
    taxonomy = Taxonomy(*pool.lookup(root.key()));
    pool.place(taxonomy.root());
    history.push_back(system_message());
    for (const auto& d : config.demonstrations) {
      history.insert(history.end(), d.dialogue.begin(), d.dialogue.end());
    }
  }

  Entity checked_root(const Entity& root) const {
    if (!pool.in_set(root)) {
      throw Error(ErrorCode::kRootNotInEntityList,
                  "root '" + root.surface() + "' is not in the entity list",
                  {root.key()});
    }
    return root;
  }

  std::string ask(ChatBackend& backend) {
    ChatRequest req{history, config.model, config.temperature,
                    config.max_output_tokens};
    return backend.complete(req);
  }

  const InductionConfig& config;
  EntityPool pool;
  Taxonomy taxonomy;
  ChatTranscript history;
};

struct Merge {
  std::vector<Edge> added;
  std::vector<Entity> selected;
  std::vector<std::string> diagnostics;
};

// Folds the reply outline into `t`. Lines naming already-placed entities only
// serve as anchors; lines that cannot be placed pass their children up to the
// nearest placed ancestor.
Merge merge_outline(const Outline& outline, Taxonomy& t, EntityPool& pool,
                    bool strict) {
  Merge m;
  const auto parents = outline_parents(outline);
  std::vector<std::optional<Entity>> resolved(outline.lines.size());
  for (std::size_t i = 0; i < outline.lines.size(); ++i) {
    const Entity e(outline.lines[i].surface);
    if (parents[i] < 0) {
      if (e != t.root()) {
        m.diagnostics.push_back("root line '" + e.surface() +
                                "' read as '" + t.root().surface() + "'");
      }
      resolved[i] = t.root();
      continue;
    }
    int p = parents[i];
    while (!resolved[p]) p = parents[p];
    const Entity anchor = *resolved[p];

    if (t.contains(e)) {
      auto current = t.parent_of(e);
      if (current != std::optional<Entity>(anchor)) {
        m.diagnostics.push_back("modification ignored: '" + e.surface() +
                                "' stays where it was placed");
      }
      resolved[i] = *t.find(e.key());
      continue;
    }
    if (pool.in_set(e)) {
      if (!pool.is_remaining(e)) {
        m.diagnostics.push_back("'" + e.surface() + "' is no longer available");
        continue;
      }
      const Entity canon = *pool.lookup(e.key());
      t.add_leaf(anchor, canon);
      pool.select(canon);
      m.added.push_back({anchor, canon});
      m.selected.push_back(canon);
      resolved[i] = canon;
      continue;
    }
    pool.note_out_of_set(e);
    if (strict) {
      m.diagnostics.push_back("out-of-set entity '" + e.surface() + "' pruned");
      continue;
    }
    t.add_leaf(anchor, e);
    m.added.push_back({anchor, e});
    resolved[i] = e;
  }
  return m;
}

std::vector<std::string> describe(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) {
    std::string s(diagnostic_kind_name(d.kind));
    if (d.line_no > 0) s += " (line " + std::to_string(d.line_no) + ")";
    out.push_back(s + ": " + d.message);
  }
  return out;
}

// Runs the filter over this layer's edges and returns the edges that survive.
std::vector<Edge> apply_filter(Session& s, const std::vector<Edge>& added,
                               ScorerBackend& scorer, bool requeue,
                               IterationRecord& rec) {
  const TemplateSet templates = s.config.templates.empty()
                                    ? TemplateSet::defaults()
                                    : TemplateSet(s.config.templates);
  FilterOptions opts{s.config.top_k, s.config.candidate_pool, requeue};
  FilterResult r =
      filter_layer(s.taxonomy, added, s.pool, templates, scorer, opts);
  s.taxonomy = std::move(r.taxonomy);
  s.pool = std::move(r.pool);
  std::vector<Edge> kept = r.report.kept_edges();
  rec.filter = std::move(r.report);
  return kept;
}

void finish(InductionReport& report, const Session& s) {
  report.final_taxonomy = s.taxonomy;
  report.unplaced = s.pool.remaining();
  report.dropped = s.pool.dropped();
  for (const auto& e : s.pool.out_of_set()) {
    if (!s.taxonomy.contains(e)) report.dropped_hallucinations.push_back(e);
  }
  report.transcript = s.history;
}

std::string canonical_reply(int k, const Taxonomy& t) {
  if (k == 1 && t.size() == 1) return first_layer_reply(t);
  return layer_reply(t);
}

}  // namespace

InductionReport induce_hf(std::span<const Entity> entities, const Entity& root,
                          const InductionConfig& config, ChatBackend& backend,
                          ScorerBackend* scorer) {
  config.validate();
  if (config.filter_enabled && scorer == nullptr) {
    throw Error(ErrorCode::kPrecondition, "filter enabled without a scorer");
  }
  Session s(entities, root, config);
  s.history.push_back(
      build_hf_instruction(s.taxonomy.root(), s.pool.all(), config.rules, false));
  const std::string reply = s.ask(backend);
  s.history.push_back({Role::kAssistant, reply});

  ParsedOutline parsed;
  try {
    parsed = parse_outline(reply);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyInput) throw;
    throw Error(ErrorCode::kNoRootLine, "empty reply");
  }
  IterationRecord rec;
  rec.k = 1;
  rec.reply = reply;
  rec.diagnostics = describe(parsed.diagnostics);
  Merge m = merge_outline(parsed.outline, s.taxonomy, s.pool,
                          config.strict_entity_set);
  rec.selected = m.selected;
  rec.diagnostics.insert(rec.diagnostics.end(), m.diagnostics.begin(),
                         m.diagnostics.end());
  rec.committed = m.added;
  if (config.filter_enabled && !m.added.empty()) {
    rec.committed = apply_filter(s, m.added, *scorer, false, rec);
  }
  s.pool.commit();
  rec.outline = render_outline(s.taxonomy);

  InductionReport report(s.taxonomy);
  report.iterations.push_back(std::move(rec));
  report.termination = s.pool.remaining_count() == 0
                           ? Termination::kPoolEmpty
                           : Termination::kMaxIterations;
  finish(report, s);
  return report;
}

InductionReport induce_col(std::span<const Entity> entities, const Entity& root,
                           const InductionConfig& config, ChatBackend& backend,
                           ScorerBackend* scorer,
                           const IterationObserver& observer) {
  config.validate();
  if (config.filter_enabled && scorer == nullptr) {
    throw Error(ErrorCode::kPrecondition, "filter enabled without a scorer");
  }
  Session s(entities, root, config);
  InductionReport report(s.taxonomy);
  s.history.push_back(
      build_hf_instruction(s.taxonomy.root(), s.pool.all(), config.rules, true));

  int stalled = 0;
  report.termination = Termination::kMaxIterations;
  for (int k = 1; k <= config.max_iterations; ++k) {
    if (k >= 2) s.history.push_back(build_iteration_prompt(k));
    IterationRecord rec;
    rec.k = k;
    try {
      rec.reply = s.ask(backend);
    } catch (const Error& e) {
      if (!is_gateway_error(e.code())) throw;
      report.termination = Termination::kAborted;
      report.error = e.what();
      break;
    }

    const Taxonomy before = s.taxonomy;
    bool verbatim = true;
    std::size_t added = 0;
    try {
      ParsedOutline parsed = parse_outline(rec.reply);
      rec.diagnostics = describe(parsed.diagnostics);
      Merge m = merge_outline(parsed.outline, s.taxonomy, s.pool,
                              config.strict_entity_set);
      rec.selected = m.selected;
      rec.diagnostics.insert(rec.diagnostics.end(), m.diagnostics.begin(),
                             m.diagnostics.end());
      rec.committed = m.added;
      added = m.added.size();
      if (config.filter_enabled && !m.added.empty()) {
        rec.committed = apply_filter(s, m.added, *scorer, true, rec);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyInput &&
          e.code() != ErrorCode::kNoRootLine) {
        throw;
      }
      rec.diagnostics.push_back(std::string("no outline in reply: ") + e.what());
      verbatim = false;
    }
    s.pool.commit();
    diff_edges(s.taxonomy, before);  // monotone growth
    rec.outline = render_outline(s.taxonomy);
    if (!rec.diagnostics.empty() ||
        rec.committed.size() != added) {
      verbatim = false;
    }
    s.history.push_back(
        {Role::kAssistant, verbatim ? rec.reply : canonical_reply(k, s.taxonomy)});
    if (observer) observer(rec, s.taxonomy, s.pool);

    s.history.push_back(build_check_prompt());
    std::string answer;
    try {
      answer = s.ask(backend);
    } catch (const Error& e) {
      if (!is_gateway_error(e.code())) throw;
      report.iterations.push_back(std::move(rec));
      report.termination = Termination::kAborted;
      report.error = e.what();
      break;
    }
    s.history.push_back({Role::kAssistant, answer});
    rec.model_said_complete = parse_check_answer(answer);
    const bool progress = !rec.committed.empty();
    const bool said_yes = rec.model_said_complete.value_or(false);
    report.iterations.push_back(std::move(rec));

    if (s.pool.remaining_count() == 0) {
      report.termination = Termination::kPoolEmpty;
      break;
    }
    if (config.honor_model_completion && said_yes) {
      report.termination = Termination::kModelDeclaredComplete;
      break;
    }
    if (k >= 2) {
      stalled = progress ? 0 : stalled + 1;
      if (config.stall_limit > 0 && stalled >= config.stall_limit) {
        report.termination = Termination::kStalled;
        break;
      }
    }
  }
  finish(report, s);
  return report;
}

InductionReport induce(std::span<const Entity> entities, const Entity& root,
                       const InductionConfig& config, ChatBackend& backend,
                       ScorerBackend* scorer) {
  if (config.mode == InductionMode::kHfOneShot) {
    return induce_hf(entities, root, config, backend, scorer);
  }
  return induce_col(entities, root, config, backend, scorer);
}

std::vector<Demonstration> generate_zero_shot_demos(
    const Entity& root, const ZeroShotOptions& options, ChatBackend& backend,
    std::vector<std::string>* diagnostics) {
  if (options.count < 1) {
    throw Error(ErrorCode::kPrecondition, "count must be >= 1");
  }
  if (options.rules.has(Rule::kClosedWorld)) {
    throw Error(ErrorCode::kPrecondition,
                "demo generation runs without the closed-world rule");
  }
  if (options.retry_budget < 0) {
    throw Error(ErrorCode::kPrecondition, "retry_budget must be >= 0");
  }
  auto note = [&](std::string msg) {
    if (diagnostics) diagnostics->push_back(std::move(msg));
  };
  ChatRequest req{build_zero_shot_demo_request(root, options.rules),
                  options.model, options.temperature,
                  options.max_output_tokens};
  std::vector<Demonstration> demos;
  for (int i = 0; i < options.count; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt <= options.retry_budget && !ok; ++attempt) {
      const std::string reply = backend.complete(req);
      try {
        ParsedOutline parsed = parse_outline(reply);
        Taxonomy t = outline_to_taxonomy(parsed.outline, true);
        if (t.edge_count() == 0) {
          note("sample " + std::to_string(i + 1) + ": outline has no edges");
          continue;
        }
        if (t.root() != root) {
          note("sample " + std::to_string(i + 1) + ": root is '" +
               t.root().surface() + "'");
        }
        const auto nodes = t.nodes();
        demos.push_back(demonstration_from_taxonomy(t, nodes, options.rules));
        ok = true;
      } catch (const Error& e) {
        note("sample " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    if (!ok) note("sample " + std::to_string(i + 1) + " skipped");
  }
  if (static_cast<int>(demos.size()) < options.count) {
    throw Error(ErrorCode::kInsufficientDemos,
                std::to_string(demos.size()) + " of " +
                    std::to_string(options.count) + " demonstrations parsed");
  }
  return demos;
}

}  // namespace colt
