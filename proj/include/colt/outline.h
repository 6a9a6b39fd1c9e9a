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

#ifndef COLT_OUTLINE_H_
#define COLT_OUTLINE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "colt/taxonomy.h"

namespace colt {

// One "1.2.1 loop" line of the hierarchical numbering format.
struct OutlineLine {
  std::vector<int> index;
  std::string surface;

  friend bool operator==(const OutlineLine&, const OutlineLine&) = default;
};

// Lines in emission order. Every line's parent prefix appears earlier and the
// first line is the root, index [1].
struct Outline {
  std::vector<OutlineLine> lines;
};

enum class DiagnosticKind {
  kLevelSkip,       // parent prefix missing; attached to deepest known prefix
  kDuplicateIndex,  // index seen before; later line dropped
  kRenumbered,      // index rewritten to keep sibling indices unique
  kForeignRoot,     // first index component is not 1
  kOrphanLine,      // indexed line before any root line
  kDuplicateEntity, // entity listed twice; later occurrence dropped
};

std::string_view diagnostic_kind_name(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::size_t line_no;  // 1-based line in the source text, 0 if not textual
  std::string message;
};

struct ParsedOutline {
  Outline outline;
  std::vector<Diagnostic> diagnostics;
};

std::string format_index(const std::vector<int>& index);

// Extracts dotted-index lines from free text, skipping prose. Throws
// EmptyInput for blank text and NoRootLine when no [1] line exists.
ParsedOutline parse_outline(std::string_view text);

// Converts an outline to a taxonomy following index-prefix parenthood. In
// strict mode taxonomy-core errors propagate; in lenient mode a repeated
// entity is dropped (its sub-lines attach to the first occurrence) and
// reported through `diagnostics` when given.
Taxonomy outline_to_taxonomy(const Outline& outline, bool lenient = false,
                             std::vector<Diagnostic>* diagnostics = nullptr);

// Depth-first rendering: "1. root" then "1.1 child" lines, no trailing
// newline.
std::string render_outline(const Taxonomy& t);

// For each line, the position of its structural parent line (-1 for root).
std::vector<int> outline_parents(const Outline& outline);

}  // namespace colt

#endif  // COLT_OUTLINE_H_
