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

#include "support.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>

#include <unistd.h>

#include "colt/prompts.h"

namespace colt::testing {

RawTree random_raw_tree(std::mt19937_64& rng, std::vector<std::string> names,
                        int max_depth) {
  RawTree t;
  t.root = names.front();
  std::vector<std::pair<std::string, int>> open = {{names.front(), 1}};
  for (std::size_t i = 1; i < names.size(); ++i) {
    std::vector<std::size_t> growable;
    for (std::size_t j = 0; j < open.size(); ++j) {
      if (open[j].second < max_depth) growable.push_back(j);
    }
    std::uniform_int_distribution<std::size_t> pick(0, growable.size() - 1);
    const auto& parent = open[growable[pick(rng)]];
    t.edges.push_back({parent.first, names[i]});
    open.push_back({names[i], parent.second + 1});
  }
  return t;
}

std::vector<std::string> random_names(std::mt19937_64& rng, int count,
                                      const std::string& tag) {
  static const char* kWords[] = {"pale", "Green", "deep", "snap", "outer",
                                 "vertical", "Barrel", "fish", "straight-arm"};
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> word(0, 8);
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    std::string name = tag + std::to_string(i);
    if (coin(rng) == 0) name = std::string(kWords[word(rng)]) + " " + name;
    if (coin(rng) == 0) name += std::string(" ") + kWords[word(rng)];
    out.push_back(name);
  }
  return out;
}

Taxonomy to_taxonomy(const RawTree& t) {
  std::vector<Edge> edges;
  for (const auto& [p, c] : t.edges) edges.push_back({Entity(p), Entity(c)});
  return Taxonomy::build(Entity(t.root), edges);
}

namespace {

std::map<std::string, std::string> parent_map(const RawTree& t) {
  std::map<std::string, std::string> out;
  for (const auto& [p, c] : t.edges) out[normalize_key(c)] = normalize_key(p);
  return out;
}

}  // namespace

std::set<KeyPair> oracle_edges(const RawTree& t) {
  std::set<KeyPair> out;
  for (const auto& [p, c] : t.edges) {
    out.insert({normalize_key(p), normalize_key(c)});
  }
  return out;
}

std::set<KeyPair> oracle_closure(const RawTree& t) {
  const auto parent = parent_map(t);
  std::set<KeyPair> out;
  for (const auto& [child, _] : parent) {
    std::string cur = child;
    while (parent.count(cur)) {
      cur = parent.at(cur);
      out.insert({cur, child});
    }
  }
  return out;
}

std::set<std::string> oracle_nodes(const RawTree& t) {
  std::set<std::string> out = {normalize_key(t.root)};
  for (const auto& [p, c] : t.edges) {
    out.insert(normalize_key(p));
    out.insert(normalize_key(c));
  }
  return out;
}

std::vector<std::string> col_script(const Taxonomy& gold) {
  std::vector<std::string> out = {first_layer_reply(gold.truncated(1))};
  for (int k = 2; k <= gold.levels(); ++k) {
    out.push_back(check_reply(false));
    out.push_back(layer_reply(gold.truncated(k)));
  }
  out.push_back(check_reply(true));
  return out;
}

std::vector<std::string> noisy_col_script(std::mt19937_64& rng,
                                          const Taxonomy& gold) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::string> out;
  const int turns = gold.levels() + 2;
  int ghost = 0;
  for (int k = 1; k <= turns; ++k) {
    if (u(rng) < 0.15) {
      out.push_back("a complete taxonomy is beyond the scope of this interaction");
    } else {
      const Taxonomy layer = gold.truncated(std::min(k, gold.levels()));
      // Rebuild with perturbations: skip nodes, hang nodes under ghosts,
      // or move them under a random earlier node.
      std::vector<Entity> placed = {layer.root()};
      Taxonomy t(layer.root());
      for (const auto& n : layer.nodes()) {
        if (n == layer.root()) continue;
        Entity parent = *layer.parent_of(n);
        if (!t.contains(parent)) parent = layer.root();
        const double r = u(rng);
        if (r < 0.1) continue;
        if (r < 0.2) {
          Entity g("ghost " + std::to_string(ghost++));
          t.add_leaf(parent, g);
          parent = g;
        } else if (r < 0.3) {
          std::uniform_int_distribution<std::size_t> pick(0, placed.size() - 1);
          parent = placed[pick(rng)];
        }
        t.add_leaf(parent, n);
        placed.push_back(n);
      }
      out.push_back(layer_reply(t));
    }
    out.push_back(u(rng) < 0.2 ? check_reply(true) : check_reply(false));
  }
  return out;
}

std::string fixture(const std::string& name) {
  return std::string(COLT_FIXTURE_DIR) + "/" + name;
}

std::string scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("colt-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

MockServer::MockServer() = default;

MockServer::~MockServer() {
  server_.stop();
  if (thread_.joinable()) thread_.join();
}

void MockServer::start() {
  port_ = server_.bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
}

std::string MockServer::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(port_) + path;
}

int closed_port() {
  httplib::Server s;
  int port = s.bind_to_any_port("127.0.0.1");
  return port;  // released when `s` goes away
}

}  // namespace colt::testing
