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

#include "colt/taxonomy.h"

#include <algorithm>
#include <cctype>

namespace colt {

std::string normalize_key(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool pending_space = false;
  for (char ch : surface) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

Entity::Entity(std::string_view surface) : key_(normalize_key(surface)) {
  if (key_.empty()) {
    throw Error(ErrorCode::kEmptyEntity, "entity surface is blank");
  }
  // Trim the surface but keep its case and inner spelling.
  auto begin = surface.find_first_not_of(" \t\r\n\f\v");
  auto end = surface.find_last_not_of(" \t\r\n\f\v");
  surface_ = std::string(surface.substr(begin, end - begin + 1));
}

std::vector<Entity> make_entities(std::span<const std::string> surfaces) {
  std::vector<Entity> out;
  out.reserve(surfaces.size());
  for (const auto& s : surfaces) out.emplace_back(s);
  return out;
}

Taxonomy::Taxonomy(const Entity& root) {
  nodes_.push_back(root);
  parent_.push_back(-1);
  children_.emplace_back();
  index_.emplace(root.key(), 0);
}

Taxonomy Taxonomy::build(const Entity& root, std::span<const Edge> edges) {
  return build(root, edges, {});
}

Taxonomy Taxonomy::build(const Entity& root, std::span<const Edge> edges,
                         std::span<const Entity> nodes) {
  std::vector<Entity> seen;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const Entity& e) {
    auto [it, inserted] = index.emplace(e.key(), static_cast<int>(seen.size()));
    if (inserted) seen.push_back(e);
    return it->second;
  };
  intern(root);
  for (const auto& e : edges) {
    intern(e.parent);
    intern(e.child);
  }
  for (const auto& n : nodes) intern(n);

  const int n = static_cast<int>(seen.size());
  std::vector<int> parent(n, -1);
  std::vector<std::vector<int>> children(n);
  for (const auto& e : edges) {
    int p = index.at(e.parent.key());
    int c = index.at(e.child.key());
    if (p == c) {
      throw Error(ErrorCode::kCycleDetected,
                  "self edge on '" + e.child.key() + "'", {e.child.key()});
    }
    if (parent[c] == p) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge (" + e.parent.key() + ", " + e.child.key() +
                      ") listed twice",
                  {e.parent.key(), e.child.key()});
    }
    if (parent[c] != -1) {
      const auto& other = seen[parent[c]].key();
      throw Error(ErrorCode::kDuplicateParent,
                  "'" + e.child.key() + "' has parents '" + other + "' and '" +
                      e.parent.key() + "'",
                  {e.child.key(), other, e.parent.key()});
    }
    parent[c] = p;
    children[p].push_back(c);
  }

  // Every node has at most one parent, so a cycle is found by walking up.
  std::vector<int> color(n, 0);  // 0 new, 1 on current walk, 2 done
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    std::vector<int> walk;
    int v = start;
    while (v != -1 && color[v] == 0) {
      color[v] = 1;
      walk.push_back(v);
      v = parent[v];
    }
    if (v != -1 && color[v] == 1) {
      std::vector<std::string> cycle;
      auto it = std::find(walk.begin(), walk.end(), v);
      for (; it != walk.end(); ++it) cycle.push_back(seen[*it].key());
      std::string msg = "cycle through";
      for (const auto& k : cycle) msg += " '" + k + "'";
      throw Error(ErrorCode::kCycleDetected, msg, cycle);
    }
    for (int w : walk) color[w] = 2;
  }

  std::vector<std::string> isolated;
  std::vector<std::string> extra_roots;
  for (int v = 1; v < n; ++v) {
    if (parent[v] != -1) continue;
    if (children[v].empty()) {
      isolated.push_back(seen[v].key());
    } else {
      extra_roots.push_back(seen[v].key());
    }
  }
  if (parent[0] != -1) {
    int top = 0;
    while (parent[top] != -1) top = parent[top];
    throw Error(ErrorCode::kMultipleRoots,
                "declared root '" + root.key() + "' sits below '" +
                    seen[top].key() + "'",
                {root.key(), seen[top].key()});
  }
  if (!extra_roots.empty()) {
    std::vector<std::string> all = {root.key()};
    all.insert(all.end(), extra_roots.begin(), extra_roots.end());
    std::string msg = "nodes without parent besides the root:";
    for (const auto& k : extra_roots) msg += " '" + k + "'";
    throw Error(ErrorCode::kMultipleRoots, msg, all);
  }
  if (!isolated.empty()) {
    std::string msg = "nodes not connected to the root:";
    for (const auto& k : isolated) msg += " '" + k + "'";
    throw Error(ErrorCode::kDisconnectedNode, msg, isolated);
  }

  // Lay nodes out in preorder so indices follow rendering order.
  Taxonomy t(root);
  std::vector<std::pair<int, int>> stack;  // (old index, new parent index)
  for (auto it = children[0].rbegin(); it != children[0].rend(); ++it) {
    stack.emplace_back(*it, 0);
  }
  while (!stack.empty()) {
    auto [old, new_parent] = stack.back();
    stack.pop_back();
    int idx = static_cast<int>(t.nodes_.size());
    t.nodes_.push_back(seen[old]);
    t.parent_.push_back(new_parent);
    t.children_.emplace_back();
    t.children_[new_parent].push_back(idx);
    t.index_.emplace(seen[old].key(), idx);
    for (auto it = children[old].rbegin(); it != children[old].rend(); ++it) {
      stack.emplace_back(*it, idx);
    }
  }
  return t;
}

std::vector<int> Taxonomy::preorder() const {
  std::vector<int> order;
  order.reserve(nodes_.size());
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) {
      stack.push_back(*it);
    }
  }
  return order;
}

std::vector<Entity> Taxonomy::nodes() const {
  std::vector<Entity> out;
  out.reserve(nodes_.size());
  for (int v : preorder()) out.push_back(nodes_[v]);
  return out;
}

std::vector<Edge> Taxonomy::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (int v : preorder()) {
    if (parent_[v] >= 0) out.push_back({nodes_[parent_[v]], nodes_[v]});
  }
  return out;
}

EdgeSet Taxonomy::edge_set() const {
  EdgeSet out;
  for (std::size_t v = 1; v < nodes_.size(); ++v) {
    out.insert({nodes_[parent_[v]], nodes_[v]});
  }
  return out;
}

bool Taxonomy::contains_key(std::string_view key) const {
  return index_.count(std::string(key)) > 0;
}

std::optional<Entity> Taxonomy::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return nodes_[it->second];
}

int Taxonomy::index_of(const Entity& e) const {
  auto it = index_.find(e.key());
  if (it == index_.end()) {
    throw Error(ErrorCode::kPrecondition,
                "'" + e.key() + "' is not in the taxonomy", {e.key()});
  }
  return it->second;
}

std::optional<Entity> Taxonomy::parent_of(const Entity& e) const {
  int p = parent_[index_of(e)];
  if (p < 0) return std::nullopt;
  return nodes_[p];
}

std::vector<Entity> Taxonomy::children_of(const Entity& e) const {
  std::vector<Entity> out;
  for (int c : children_[index_of(e)]) out.push_back(nodes_[c]);
  return out;
}

bool Taxonomy::is_leaf(const Entity& e) const {
  return children_[index_of(e)].empty();
}

int Taxonomy::depth_of(const Entity& e) const {
  int d = 0;
  for (int v = parent_[index_of(e)]; v >= 0; v = parent_[v]) ++d;
  return d;
}

int Taxonomy::levels() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (int v : preorder()) {
    if (parent_[v] >= 0) depth[v] = depth[parent_[v]] + 1;
    deepest = std::max(deepest, depth[v]);
  }
  return deepest + 1;
}

void Taxonomy::add_leaf(const Entity& parent, const Entity& child) {
  int p = index_of(parent);
  if (contains(child)) {
    throw Error(parent == child ? ErrorCode::kCycleDetected
                                : ErrorCode::kDuplicateParent,
                "'" + child.key() + "' is already placed", {child.key()});
  }
  int idx = static_cast<int>(nodes_.size());
  nodes_.push_back(child);
  parent_.push_back(p);
  children_.emplace_back();
  children_[p].push_back(idx);
  index_.emplace(child.key(), idx);
}

Taxonomy Taxonomy::with_leaf(const Entity& parent, const Entity& child) const {
  Taxonomy t = *this;
  t.add_leaf(parent, child);
  return t;
}

Taxonomy Taxonomy::truncated(int levels) const {
  if (levels < 1) {
    throw Error(ErrorCode::kPrecondition, "truncation needs at least 1 level");
  }
  Taxonomy t(root());
  std::vector<int> depth(nodes_.size(), 0);
  for (int v : preorder()) {
    if (parent_[v] < 0) continue;
    depth[v] = depth[parent_[v]] + 1;
    if (depth[v] < levels) t.add_leaf(nodes_[parent_[v]], nodes_[v]);
  }
  return t;
}

bool operator==(const Taxonomy& a, const Taxonomy& b) {
  return a.root() == b.root() && a.size() == b.size() &&
         a.edge_set() == b.edge_set();
}

EdgeSet diff_edges(const Taxonomy& current, const Taxonomy& previous) {
  EdgeSet cur = current.edge_set();
  EdgeSet prev = previous.edge_set();
  std::vector<std::string> lost;
  for (const auto& e : prev) {
    if (!cur.count(e)) lost.push_back(e.parent.key() + " -> " + e.child.key());
  }
  if (!lost.empty()) {
    std::string msg = "previous edges missing from current:";
    for (const auto& s : lost) msg += " (" + s + ")";
    throw Error(ErrorCode::kNonMonotoneUpdate, msg, lost);
  }
  EdgeSet out;
  std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(),
                      std::inserter(out, out.end()));
  return out;
}

EdgeSet ancestor_closure(const Taxonomy& t) {
  EdgeSet out;
  for (const auto& node : t.nodes()) {
    for (auto up = t.parent_of(node); up; up = t.parent_of(*up)) {
      out.insert({*up, node});
    }
  }
  return out;
}

std::pair<Taxonomy, Entity> remove_edge_and_detach(const Taxonomy& t,
                                                   const Edge& edge) {
  if (!t.contains(edge.child) || !t.contains(edge.parent) ||
      t.parent_of(edge.child) != std::optional<Entity>(edge.parent)) {
    throw Error(ErrorCode::kUnknownEdge,
                "edge (" + edge.parent.key() + ", " + edge.child.key() +
                    ") is not in the taxonomy",
                {edge.parent.key(), edge.child.key()});
  }
  if (!t.is_leaf(edge.child)) {
    throw Error(ErrorCode::kNotALeaf,
                "'" + edge.child.key() + "' still has children",
                {edge.child.key()});
  }
  Taxonomy out(t.root());
  for (const auto& e : t.edges()) {
    if (e.child == edge.child) continue;
    out.add_leaf(e.parent, e.child);
  }
  return {std::move(out), t.find(edge.child.key()).value()};
}

EntityPool::EntityPool(std::span<const Entity> all) {
  for (const auto& e : all) {
    if (index_.emplace(e.key(), all_.size()).second) {
      all_.push_back(e);
      state_.push_back(State::kRemaining);
    }
  }
}

std::vector<Entity> EntityPool::collect(State s) const {
  std::vector<Entity> out;
  for (std::size_t i = 0; i < all_.size(); ++i) {
    if (state_[i] == s) out.push_back(all_[i]);
  }
  return out;
}

std::size_t EntityPool::remaining_count() const {
  return static_cast<std::size_t>(
      std::count(state_.begin(), state_.end(), State::kRemaining));
}

bool EntityPool::is_remaining(const Entity& e) const {
  auto it = index_.find(e.key());
  return it != index_.end() && state_[it->second] == State::kRemaining;
}

std::optional<Entity> EntityPool::lookup(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return all_[it->second];
}

EntityPool::State& EntityPool::state_of(const Entity& e) {
  auto it = index_.find(e.key());
  if (it == index_.end()) {
    throw Error(ErrorCode::kPrecondition,
                "'" + e.key() + "' is not in the entity set", {e.key()});
  }
  return state_[it->second];
}

void EntityPool::select(const Entity& e) {
  State& s = state_of(e);
  if (s != State::kRemaining) {
    throw Error(ErrorCode::kPrecondition,
                "'" + e.key() + "' is not in the remaining list", {e.key()});
  }
  s = State::kSelected;
}

void EntityPool::place(const Entity& e) {
  State& s = state_of(e);
  if (s != State::kRemaining) {
    throw Error(ErrorCode::kPrecondition,
                "'" + e.key() + "' is not in the remaining list", {e.key()});
  }
  s = State::kPlaced;
}

void EntityPool::requeue(const Entity& e) {
  State& s = state_of(e);
  if (s != State::kSelected && s != State::kPlaced) {
    throw Error(ErrorCode::kPrecondition,
                "'" + e.key() + "' is not placed", {e.key()});
  }
  s = State::kRemaining;
}

void EntityPool::drop(const Entity& e) { state_of(e) = State::kDropped; }

void EntityPool::note_out_of_set(const Entity& e) {
  if (std::find(out_of_set_.begin(), out_of_set_.end(), e) ==
      out_of_set_.end()) {
    out_of_set_.push_back(e);
  }
}

void EntityPool::commit() {
  for (auto& s : state_) {
    if (s == State::kSelected) s = State::kPlaced;
  }
}

}  // namespace colt
