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

#ifndef COLT_PROMPTS_H_
#define COLT_PROMPTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/taxonomy.h"

namespace colt {

enum class Rule : std::uint8_t {
  kClosedWorld = 1,  // only and all given entities
  kSingleRoot = 2,
  kNoComments = 4,
};

class RuleSet {
 public:
  constexpr RuleSet() = default;
  // All three rules; used for few-shot induction.
  static constexpr RuleSet full() { return RuleSet(7); }
  // Closed-world rule lifted; used for zero-shot demo generation.
  static constexpr RuleSet free_form() { return RuleSet(6); }

  constexpr bool has(Rule r) const {
    return (bits_ & static_cast<std::uint8_t>(r)) != 0;
  }
  constexpr RuleSet with(Rule r) const {
    return RuleSet(bits_ | static_cast<std::uint8_t>(r));
  }
  constexpr RuleSet without(Rule r) const {
    return RuleSet(bits_ & ~static_cast<std::uint8_t>(r));
  }
  constexpr std::uint8_t bits() const { return bits_; }
  friend constexpr bool operator==(RuleSet, RuleSet) = default;

 private:
  constexpr explicit RuleSet(int bits) : bits_(static_cast<std::uint8_t>(bits)) {}
  std::uint8_t bits_ = 0;
};

enum class Role { kSystem, kUser, kAssistant };

std::string_view role_name(Role role);
Role parse_role(std::string_view name);

struct ChatMessage {
  Role role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using ChatTranscript = std::vector<ChatMessage>;

// A gold taxonomy unrolled into dialogue turns.
struct Demonstration {
  Taxonomy taxonomy;
  ChatTranscript dialogue;
};

inline constexpr std::string_view kSystemPrompt =
    "You are an expert in constructing a taxonomy from a list of concepts.";
inline constexpr std::string_view kCheckPrompt =
    "Check: Is the remaining entity list empty?";
inline constexpr std::string_view kTaxonomyPreamble = "The current taxonomy is:";
inline constexpr std::string_view kAnswerNo = "Answer: No.";
inline constexpr std::string_view kAnswerYes =
    "Answer: Yes.\nThe taxonomy is complete.";
inline constexpr std::string_view kStepByStep = "Let's do it step by step.";

ChatMessage system_message();

// Python-style list rendering: ['a', 'b'].
std::string render_entity_list(std::span<const Entity> entities);

// The induction instruction. `step_by_step` appends the layer-wise cue used in
// CoL mode. Throws RootNotInEntityList.
ChatMessage build_hf_instruction(const Entity& root,
                                 std::span<const Entity> entities,
                                 RuleSet rules, bool step_by_step = true);

// "Then, let's find all the k-level entities ..." for k >= 2.
ChatMessage build_iteration_prompt(int k);
ChatMessage build_check_prompt();

// Assistant turn text for the opening layer and for later layers.
std::string first_layer_reply(const Taxonomy& layer_one);
std::string layer_reply(const Taxonomy& t);
std::string check_reply(bool remaining_empty);

// Layer-by-layer dialogue replaying `gold`, starting with the instruction.
Demonstration demonstration_from_taxonomy(const Taxonomy& gold,
                                          std::span<const Entity> entities,
                                          RuleSet rules = RuleSet::full());

// Instruction and the complete outline in one assistant turn.
Demonstration hf_demonstration_from_taxonomy(const Taxonomy& gold,
                                             std::span<const Entity> entities,
                                             RuleSet rules = RuleSet::full());

// System message plus a free-generation request rooted at `root`. Rules must
// not include the closed-world rule.
ChatTranscript build_zero_shot_demo_request(const Entity& root, RuleSet rules);

// Parses the model's answer to the check prompt; nullopt when unclear.
std::optional<bool> parse_check_answer(std::string_view reply);

}  // namespace colt

#endif  // COLT_PROMPTS_H_
