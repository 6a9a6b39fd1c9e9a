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
#include <random>
#include <string>
#include <unordered_set>

#include "colt/harness.h"

namespace colt {

Taxonomy sample_subtaxonomy(const Taxonomy& gold, int target_size,
                            std::uint64_t seed) {
  if (target_size < 1) {
    throw Error(ErrorCode::kPrecondition, "target size must be positive");
  }
  if (static_cast<std::size_t>(target_size) > gold.size()) {
    throw Error(ErrorCode::kTargetTooLarge,
                "target " + std::to_string(target_size) + " exceeds " +
                    std::to_string(gold.size()) + " nodes");
  }
  std::mt19937_64 rng(seed);
  std::unordered_set<std::string> chosen = {gold.root().key()};
  std::vector<Entity> frontier = gold.children_of(gold.root());
  while (chosen.size() < static_cast<std::size_t>(target_size)) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t i = pick(rng);
    Entity next = frontier[i];
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i));
    chosen.insert(next.key());
    for (const auto& c : gold.children_of(next)) frontier.push_back(c);
  }
  Taxonomy out(gold.root());
  for (const auto& n : gold.nodes()) {
    if (n == gold.root() || !chosen.count(n.key())) continue;
    out.add_leaf(*gold.parent_of(n), n);
  }
  return out;
}

Taxonomy sample_subtaxonomy_band(const Taxonomy& gold, int min_size,
                                 int max_size, std::uint64_t seed) {
  if (min_size < 1 || max_size < min_size) {
    throw Error(ErrorCode::kPrecondition, "invalid size band");
  }
  if (static_cast<std::size_t>(min_size) > gold.size()) {
    throw Error(ErrorCode::kTargetTooLarge,
                "band minimum " + std::to_string(min_size) + " exceeds " +
                    std::to_string(gold.size()) + " nodes");
  }
  const int hi = std::min<int>(max_size, static_cast<int>(gold.size()));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(min_size, hi);
  return sample_subtaxonomy(gold, size(rng), seed ^ 0x9e3779b97f4a7c15ULL);
}

}  // namespace colt
