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

#include "colt/prompts.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "colt/outline.h"

namespace colt {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view name) {
  if (name == "system") return Role::kSystem;
  if (name == "user") return Role::kUser;
  if (name == "assistant") return Role::kAssistant;
  throw Error(ErrorCode::kParseError, "unknown chat role '" + std::string(name) + "'");
}

ChatMessage system_message() {
  return {Role::kSystem, std::string(kSystemPrompt)};
}

std::string render_entity_list(std::span<const Entity> entities) {
  std::string out = "[";
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (i) out += ", ";
    const std::string& s = entities[i].surface();
    bool has_single = s.find('\'') != std::string::npos;
    bool has_double = s.find('"') != std::string::npos;
    char quote = (has_single && !has_double) ? '"' : '\'';
    out.push_back(quote);
    for (char c : s) {
      if (c == '\\' || c == quote) out.push_back('\\');
      out.push_back(c);
    }
    out.push_back(quote);
  }
  out += "]";
  return out;
}

namespace {

const char kFormatSentence[] =
    "The format of the generated taxonomy is: 1. Parent Concept 1.1 Child "
    "Concept.";
const char kKeepNamesSentence[] =
    "Do not change any entity names when building the taxonomy.";
const char kNoCommentsSentence[] = "Do not add any comments.";
const char kSingleRootSentence[] =
    "There should be one and only one root node of the taxonomy.";
const char kClosedWorldSentence[] =
    "All entities in the entity list must appear in the taxonomy and don't "
    "add any entities that are not in the entity list.";

std::string rule_sentences(RuleSet rules) {
  std::string out;
  if (rules.has(Rule::kNoComments)) out += std::string(" ") + kNoCommentsSentence;
  if (rules.has(Rule::kSingleRoot)) out += std::string(" ") + kSingleRootSentence;
  if (rules.has(Rule::kClosedWorld)) out += std::string(" ") + kClosedWorldSentence;
  return out;
}

void check_covers(const Taxonomy& gold, std::span<const Entity> entities) {
  std::unordered_set<std::string> keys;
  for (const auto& e : entities) keys.insert(e.key());
  bool same = keys.size() == gold.size();
  for (const auto& n : gold.nodes()) same = same && keys.count(n.key());
  if (!same) {
    throw Error(ErrorCode::kPrecondition,
                "demonstration entity list must equal the taxonomy's nodes");
  }
}

}  // namespace

ChatMessage build_hf_instruction(const Entity& root,
                                 std::span<const Entity> entities,
                                 RuleSet rules, bool step_by_step) {
  if (std::find(entities.begin(), entities.end(), root) == entities.end()) {
    throw Error(ErrorCode::kRootNotInEntityList,
                "root '" + root.key() + "' is not in the entity list",
                {root.key()});
  }
  std::string text = "Build a taxonomy whose root concept is " +
                     root.surface() +
                     " with the given list of entities. " + kFormatSentence +
                     " " + kKeepNamesSentence + rule_sentences(rules);
  text += "\nEntity list: " + render_entity_list(entities);
  if (step_by_step) text += "\n" + std::string(kStepByStep);
  return {Role::kUser, std::move(text)};
}

ChatMessage build_iteration_prompt(int k) {
  if (k < 2) {
    throw Error(ErrorCode::kPrecondition,
                "iteration prompts start at level 2; level 1 is the opening "
                "instruction");
  }
  return {Role::kUser, "Then, let's find all the " + std::to_string(k) +
                           "-level entities from the remaining entity list."};
}

ChatMessage build_check_prompt() {
  return {Role::kUser, std::string(kCheckPrompt)};
}

std::string first_layer_reply(const Taxonomy& layer_one) {
  return "First, the entity in the first level of the taxonomy is " +
         layer_one.root().surface() + ".\n" + std::string(kTaxonomyPreamble) +
         "\n" + render_outline(layer_one);
}

std::string layer_reply(const Taxonomy& t) {
  return std::string(kTaxonomyPreamble) + "\n" + render_outline(t);
}

std::string check_reply(bool remaining_empty) {
  return std::string(remaining_empty ? kAnswerYes : kAnswerNo);
}

Demonstration demonstration_from_taxonomy(const Taxonomy& gold,
                                          std::span<const Entity> entities,
                                          RuleSet rules) {
  check_covers(gold, entities);
  Demonstration demo{gold, {}};
  auto& d = demo.dialogue;
  d.push_back(build_hf_instruction(gold.root(), entities, rules, true));
  d.push_back({Role::kAssistant, first_layer_reply(gold.truncated(1))});
  const int levels = gold.levels();
  for (int k = 1; k <= levels; ++k) {
    if (k > 1) {
      d.push_back(build_iteration_prompt(k));
      d.push_back({Role::kAssistant, layer_reply(gold.truncated(k))});
    }
    d.push_back(build_check_prompt());
    d.push_back({Role::kAssistant, check_reply(k == levels)});
  }
  return demo;
}

Demonstration hf_demonstration_from_taxonomy(const Taxonomy& gold,
                                             std::span<const Entity> entities,
                                             RuleSet rules) {
  check_covers(gold, entities);
  Demonstration demo{gold, {}};
  demo.dialogue.push_back(
      build_hf_instruction(gold.root(), entities, rules, false));
  demo.dialogue.push_back({Role::kAssistant, render_outline(gold)});
  return demo;
}

ChatTranscript build_zero_shot_demo_request(const Entity& root,
                                            RuleSet rules) {
  if (rules.has(Rule::kClosedWorld)) {
    throw Error(ErrorCode::kPrecondition,
                "zero-shot demo generation runs without the closed-world rule");
  }
  std::string text = "Build a taxonomy whose root concept is " +
                     root.surface() + ". " + kFormatSentence +
                     rule_sentences(rules);
  return {system_message(), {Role::kUser, std::move(text)}};
}

std::optional<bool> parse_check_answer(std::string_view reply) {
  std::string lower;
  for (char c : reply) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::size_t at = lower.find("answer:");
  std::size_t pos = at == std::string::npos ? 0 : at + 7;
  while (pos < lower.size() && std::isspace(static_cast<unsigned char>(lower[pos]))) {
    ++pos;
  }
  if (lower.compare(pos, 3, "yes") == 0) return true;
  if (lower.compare(pos, 2, "no") == 0) return false;
  return std::nullopt;
}

}  // namespace colt
