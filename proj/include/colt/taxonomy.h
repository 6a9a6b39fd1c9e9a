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

#ifndef COLT_TAXONOMY_H_
#define COLT_TAXONOMY_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "colt/error.h"

namespace colt {

// Lowercases, trims and collapses internal whitespace runs to one space.
std::string normalize_key(std::string_view surface);

// A taxonomy concept. Identity is the normalized key; the surface form of the
// first occurrence is kept for rendering.
class Entity {
 public:
  explicit Entity(std::string_view surface);

  const std::string& surface() const { return surface_; }
  const std::string& key() const { return key_; }

  friend bool operator==(const Entity& a, const Entity& b) {
    return a.key_ == b.key_;
  }
  friend std::strong_ordering operator<=>(const Entity& a, const Entity& b) {
    return a.key_ <=> b.key_;
  }

 private:
  std::string surface_;
  std::string key_;
};

struct EntityHash {
  std::size_t operator()(const Entity& e) const {
    return std::hash<std::string>()(e.key());
  }
};

std::vector<Entity> make_entities(std::span<const std::string> surfaces);

// Directed (parent, child) pair. Also used for (ancestor, descendant) pairs.
struct Edge {
  Entity parent;
  Entity child;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend std::strong_ordering operator<=>(const Edge&, const Edge&) = default;
};

using EdgeSet = std::set<Edge>;

// Single-rooted tree of entities. Every non-root node has exactly one parent.
// Children keep insertion order, which is the rendering order.
class Taxonomy {
 public:
  explicit Taxonomy(const Entity& root);

  // Validates and builds. Errors: CycleDetected (including self edges),
  // DuplicateEdge, DuplicateParent, MultipleRoots, DisconnectedNode.
  static Taxonomy build(const Entity& root, std::span<const Edge> edges);
  // Same, but every entity of `nodes` must be covered; an entity touched by
  // no edge is a DisconnectedNode.
  static Taxonomy build(const Entity& root, std::span<const Edge> edges,
                        std::span<const Entity> nodes);

  const Entity& root() const { return nodes_.front(); }
  // Depth-first preorder, root first.
  std::vector<Entity> nodes() const;
  // Depth-first preorder of child endpoints.
  std::vector<Edge> edges() const;
  EdgeSet edge_set() const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return nodes_.size() - 1; }

  bool contains(const Entity& e) const { return index_.count(e.key()) > 0; }
  bool contains_key(std::string_view key) const;
  // Surface-preserving lookup by key; nullopt when absent.
  std::optional<Entity> find(std::string_view key) const;
  std::optional<Entity> parent_of(const Entity& e) const;
  std::vector<Entity> children_of(const Entity& e) const;
  bool is_leaf(const Entity& e) const;
  // Root has depth 0.
  int depth_of(const Entity& e) const;
  // Number of levels; a singleton has 1.
  int levels() const;

  // Appends `child` as the last child of `parent`. The child must be new.
  void add_leaf(const Entity& parent, const Entity& child);
  Taxonomy with_leaf(const Entity& parent, const Entity& child) const;
  // Keeps only nodes on the first `levels` levels.
  Taxonomy truncated(int levels) const;

  // Same root and same edge set; sibling order is ignored.
  friend bool operator==(const Taxonomy& a, const Taxonomy& b);

 private:
  int index_of(const Entity& e) const;
  std::vector<int> preorder() const;

  std::vector<Entity> nodes_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::unordered_map<std::string, int> index_;
};

// current.edges \ previous.edges. NonMonotoneUpdate when previous has an edge
// current lacks.
EdgeSet diff_edges(const Taxonomy& current, const Taxonomy& previous);

// All (proper ancestor, descendant) pairs.
EdgeSet ancestor_closure(const Taxonomy& t);

// Removes a leaf edge and returns the detached child. NotALeaf if the child has
// children, UnknownEdge if the edge is absent.
std::pair<Taxonomy, Entity> remove_edge_and_detach(const Taxonomy& t,
                                                   const Edge& edge);

// Bookkeeping for one induction session over the given entity set.
//
// Each entity of the set is in exactly one state. `remaining` entities wait to
// be placed, `selected` ones were placed during the open iteration, `placed`
// ones were committed earlier and `dropped` ones were abandoned for good.
// Out-of-set names the model produced are recorded separately.
class EntityPool {
 public:
  EntityPool() = default;
  explicit EntityPool(std::span<const Entity> all);

  const std::vector<Entity>& all() const { return all_; }
  std::vector<Entity> remaining() const { return collect(State::kRemaining); }
  std::vector<Entity> selected() const { return collect(State::kSelected); }
  std::vector<Entity> placed() const { return collect(State::kPlaced); }
  std::vector<Entity> dropped() const { return collect(State::kDropped); }
  const std::vector<Entity>& out_of_set() const { return out_of_set_; }

  std::size_t remaining_count() const;
  bool in_set(const Entity& e) const { return index_.count(e.key()) > 0; }
  bool is_remaining(const Entity& e) const;
  std::optional<Entity> lookup(std::string_view key) const;

  // remaining -> selected
  void select(const Entity& e);
  // remaining -> placed (used for the root)
  void place(const Entity& e);
  // selected or placed -> remaining
  void requeue(const Entity& e);
  // any -> dropped
  void drop(const Entity& e);
  void note_out_of_set(const Entity& e);
  // selected -> placed
  void commit();

 private:
  enum class State { kRemaining, kSelected, kPlaced, kDropped };
  std::vector<Entity> collect(State s) const;
  State& state_of(const Entity& e);

  std::vector<Entity> all_;
  std::vector<State> state_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Entity> out_of_set_;
};

}  // namespace colt

#endif  // COLT_TAXONOMY_H_
