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

#include <random>
#include <set>

#include "colt/metrics.h"
#include "gtest/gtest.h"
#include "support.h"

namespace colt {
namespace {

using testing::KeyPair;

std::set<KeyPair> keys(const EdgeSet& s) {
  std::set<KeyPair> out;
  for (const auto& e : s) out.insert({e.parent.key(), e.child.key()});
  return out;
}

void expect_prf(const PRF& got, const testing::OraclePRF& want) {
  EXPECT_NEAR(got.precision, want.p, 1e-12);
  EXPECT_NEAR(got.recall, want.r, 1e-12);
  EXPECT_NEAR(got.f1, want.f, 1e-12);
}

TEST(MetricsTest, IdentityIsOne) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto raw = testing::random_raw_tree(rng, testing::random_names(rng, 1 + i % 30), 6);
    Taxonomy t = testing::to_taxonomy(raw);
    MetricsReport m = evaluate(t, t);
    for (const PRF* p : {&m.ancestor, &m.edge, &m.node}) {
      EXPECT_EQ(p->precision, 1.0);
      EXPECT_EQ(p->recall, 1.0);
      EXPECT_EQ(p->f1, 1.0);
    }
  }
}

TEST(MetricsTest, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(17);
  const auto pool = testing::random_names(rng, 16, "m");
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> a(pool.begin(), pool.end());
    std::vector<std::string> b(pool.begin(), pool.end());
    std::shuffle(a.begin() + 1, a.end(), rng);
    std::shuffle(b.begin() + 1, b.end(), rng);
    std::uniform_int_distribution<int> n(1, 12);
    a.resize(n(rng));
    b.resize(n(rng));
    auto ra = testing::random_raw_tree(rng, a, 5);
    auto rb = testing::random_raw_tree(rng, b, 5);
    MetricsReport m = evaluate(testing::to_taxonomy(ra), testing::to_taxonomy(rb));
    expect_prf(m.edge, testing::oracle_prf(testing::oracle_edges(ra),
                                           testing::oracle_edges(rb)));
    expect_prf(m.ancestor, testing::oracle_prf(testing::oracle_closure(ra),
                                               testing::oracle_closure(rb)));
    expect_prf(m.node, testing::oracle_prf(testing::oracle_nodes(ra),
                                           testing::oracle_nodes(rb)));
    EXPECT_EQ(m.edge_counts.predicted, a.size() - 1);
    EXPECT_EQ(m.node_counts.gold, b.size());
  }
}

TEST(MetricsTest, ClosureMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto raw = testing::random_raw_tree(rng, testing::random_names(rng, 1 + i % 40), 7);
    EXPECT_EQ(keys(ancestor_closure(testing::to_taxonomy(raw))),
              testing::oracle_closure(raw));
  }
}

// 22 nodes, 21 edges; two nodes hang off the wrong parent.
TEST(MetricsTest, NineteenOfTwentyOne) {
  std::vector<Edge> gold_edges, pred_edges;
  const Entity root("r");
  for (int i = 0; i < 3; ++i) {
    Entity mid("m" + std::to_string(i));
    gold_edges.push_back({root, mid});
    for (int j = 0; j < 6; ++j) {
      gold_edges.push_back({mid, Entity("l" + std::to_string(i * 6 + j))});
    }
  }
  ASSERT_EQ(gold_edges.size(), 21u);
  pred_edges = gold_edges;
  pred_edges[1].parent = Entity("m1");
  pred_edges[2].parent = Entity("m2");
  MetricsReport m = evaluate(Taxonomy::build(root, pred_edges),
                             Taxonomy::build(root, gold_edges));
  EXPECT_EQ(m.edge_counts.overlap, 19u);
  EXPECT_NEAR(m.edge.f1, 19.0 / 21.0, 1e-12);
  EXPECT_NEAR(m.edge.f1, 0.9048, 5e-5);
  EXPECT_EQ(m.node.f1, 1.0);
  // closure: 21 root pairs + 18 mid pairs
  EXPECT_EQ(m.ancestor_counts.gold, 39u);
  EXPECT_EQ(m.ancestor_counts.overlap, 37u);
}

TEST(MetricsTest, EmptyConventions) {
  SetCounts both{0, 0, 0};
  PRF p = prf_from_counts(both);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
  EXPECT_EQ(p.f1, 1.0);

  p = prf_from_counts({0, 4, 0});
  EXPECT_EQ(p.precision, 0.0);
  EXPECT_EQ(p.recall, 0.0);
  EXPECT_EQ(p.f1, 0.0);

  p = prf_from_counts({3, 0, 0});
  EXPECT_EQ(p.precision, 0.0);
  EXPECT_EQ(p.recall, 0.0);

  // Singleton against a tree: no predicted edges.
  Taxonomy gold = Taxonomy::build(Entity("a"), std::vector<Edge>{{Entity("a"), Entity("b")}});
  MetricsReport m = evaluate(Taxonomy(Entity("a")), gold);
  EXPECT_EQ(m.edge.precision, 0.0);
  EXPECT_EQ(m.edge.recall, 0.0);
  EXPECT_EQ(m.node.precision, 1.0);
  EXPECT_EQ(m.node.recall, 0.5);
  m = evaluate(Taxonomy(Entity("a")), Taxonomy(Entity("a")));
  EXPECT_EQ(m.edge.f1, 1.0);
  EXPECT_EQ(m.ancestor.f1, 1.0);
}

TEST(MetricsTest, MacroAndMicro) {
  MetricsReport a, b;
  a.edge_counts = {10, 10, 10};
  a.edge = prf_from_counts(a.edge_counts);
  b.edge_counts = {2, 4, 0};
  b.edge = prf_from_counts(b.edge_counts);
  std::vector<MetricsReport> both{a, b};

  MetricsReport macro = aggregate(both, Averaging::kMacro);
  EXPECT_NEAR(macro.edge.precision, 0.5, 1e-12);
  EXPECT_NEAR(macro.edge.recall, 0.5, 1e-12);
  EXPECT_NEAR(macro.edge.f1, 0.5, 1e-12);
  EXPECT_EQ(macro.taxonomies, 2u);
  EXPECT_EQ(macro.edge_counts.predicted, 12u);

  MetricsReport micro = aggregate(both, Averaging::kMicro);
  EXPECT_NEAR(micro.edge.precision, 10.0 / 12.0, 1e-12);
  EXPECT_NEAR(micro.edge.recall, 10.0 / 14.0, 1e-12);
  const double p = 10.0 / 12.0, r = 10.0 / 14.0;
  EXPECT_NEAR(micro.edge.f1, 2 * p * r / (p + r), 1e-12);
}

TEST(MetricsTest, MacroOfOneIsIdentity) {
  MetricsReport a;
  a.ancestor = {0.25, 0.5, 1.0 / 3.0};
  std::vector<MetricsReport> one{a};
  EXPECT_EQ(aggregate(one).ancestor.f1, a.ancestor.f1);
}

TEST(MetricsTest, EmptyListThrows) {
  std::vector<MetricsReport> none;
  try {
    aggregate(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyReportList);
  }
}

}  // namespace
}  // namespace colt
