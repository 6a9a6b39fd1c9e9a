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

#ifndef COLT_TESTS_SUPPORT_H_
#define COLT_TESTS_SUPPORT_H_

#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "colt/rank_filter.h"
#include "colt/taxonomy.h"
#include "httplib.h"

namespace colt::testing {

// A tree as plain strings, independent of the library types.
struct RawTree {
  std::string root;
  std::vector<std::pair<std::string, std::string>> edges;  // parent, child
};

// Random tree over `names` (first name is the root) with at most max_depth
// levels. Parents are chosen uniformly among nodes that may still grow.
RawTree random_raw_tree(std::mt19937_64& rng, std::vector<std::string> names,
                        int max_depth);
// Names like "n7" or "pale node 7"; some multi-word, mixed case.
std::vector<std::string> random_names(std::mt19937_64& rng, int count,
                                      const std::string& tag = "n");

Taxonomy to_taxonomy(const RawTree& t);

using KeyPair = std::pair<std::string, std::string>;

// Oracles computed straight from RawTree by repeated parent walks.
std::set<KeyPair> oracle_edges(const RawTree& t);
std::set<KeyPair> oracle_closure(const RawTree& t);
std::set<std::string> oracle_nodes(const RawTree& t);

struct OraclePRF {
  double p, r, f;
};

template <typename T>
OraclePRF oracle_prf(const std::set<T>& pred, const std::set<T>& gold) {
  if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  std::size_t hit = 0;
  for (const auto& x : pred) {
    if (gold.find(x) != gold.end()) ++hit;
  }
  double p = pred.empty() ? 0.0 : double(hit) / double(pred.size());
  double r = gold.empty() ? 0.0 : double(hit) / double(gold.size());
  double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  return {p, r, f};
}

std::string fixture(const std::string& name);

// Ensures /tmp-style scratch directories are unique per test.
std::string scratch_dir(const std::string& tag);

// Local HTTP server on an ephemeral port, stopped on destruction.
class MockServer {
 public:
  MockServer();
  ~MockServer();

  httplib::Server& server() { return server_; }
  void start();
  int port() const { return port_; }
  std::string url(const std::string& path) const;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

// Layer-by-layer replies replaying `gold`, with the opening turn and check
// answers interleaved, as a scripted backend expects them.
std::vector<std::string> col_script(const Taxonomy& gold);

// Like col_script but perturbed: prose turns, out-of-set parents, moved and
// missing nodes, and random check answers. Runs a few turns past the depth.
std::vector<std::string> noisy_col_script(std::mt19937_64& rng,
                                          const Taxonomy& gold);

// Ranks by a caller-supplied score; higher is better.
class FunctionScorer : public ScorerBackend {
 public:
  using Fn = std::function<double(const Entity& query, const Entity& anchor)>;
  explicit FunctionScorer(Fn fn) : fn_(std::move(fn)) {}

  RankMap rank(const Entity& query, std::span<const Entity> candidates,
               std::string_view) override {
    std::vector<double> scores;
    for (const auto& c : candidates) scores.push_back(fn_(query, c));
    ++calls;
    return ranks_from_scores(candidates, scores);
  }
  std::string describe() const override { return "function"; }

  int calls = 0;

 private:
  Fn fn_;
};

// Throws ScorerUnavailable on every call.
class DownScorer : public ScorerBackend {
 public:
  RankMap rank(const Entity&, std::span<const Entity>,
               std::string_view) override {
    throw Error(ErrorCode::kScorerUnavailable, "scorer down");
  }
  std::string describe() const override { return "down"; }
};

// A port nothing listens on.
int closed_port();

}  // namespace colt::testing

#endif  // COLT_TESTS_SUPPORT_H_
