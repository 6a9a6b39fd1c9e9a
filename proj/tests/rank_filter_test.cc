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
#include <atomic>
#include <map>
#include <random>

#include "colt/outline.h"
#include "colt/rank_filter.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "support.h"

namespace colt {
namespace {

using nlohmann::json;

std::vector<Entity> ents(std::vector<std::string> names) {
  return make_entities(names);
}

TEST(TemplateTest, Defaults) {
  TemplateSet t = TemplateSet::defaults();
  ASSERT_EQ(t.size(), 6u);
  for (const auto& s : t.templates()) EXPECT_TRUE(template_has_slots(s));
  EXPECT_THROW(TemplateSet({"<query> only"}), Error);
  EXPECT_THROW(TemplateSet({}), Error);
  EXPECT_FALSE(template_has_slots("<query> <anchor> <anchor>"));
}

TEST(TemplateTest, FillPicksArticle) {
  Entity roll("roll");
  EXPECT_EQ(fill_template("<query> is a/an <anchor>", roll, Entity("maneuver")),
            "roll is a maneuver");
  EXPECT_EQ(fill_template("<query> is a/an <anchor>", roll, Entity("aerial move")),
            "roll is an aerial move");
  EXPECT_EQ(fill_template("A/An <anchor> such as <query>", Entity("loop"),
                          Entity("insect")),
            "An insect such as loop");
  EXPECT_EQ(fill_template("<anchor> such as <query>", roll, Entity("flight maneuver")),
            "flight maneuver such as roll");
}

TEST(LexicalTest, HeadTokenWins) {
  // roll: head token of "barrel roll" -> 4. clinch and slip share no
  // trigram with it -> 0.
  Entity q("barrel roll");
  EXPECT_EQ(lexical_hypernymy_score(q, Entity("roll")), 4.0);
  EXPECT_EQ(lexical_hypernymy_score(q, Entity("barrel")), 2.0);
  EXPECT_EQ(lexical_hypernymy_score(q, Entity("clinch")), 0.0);
  LexicalScorer s;
  RankMap r = rank_under_template(q, ents({"clinch", "roll", "slip"}),
                                  "<query> is a kind of <anchor>", s);
  EXPECT_EQ(r.at("roll"), 1);
  EXPECT_EQ(r.at("clinch"), 2);  // tie broken by key
  EXPECT_EQ(r.at("slip"), 3);
}

TEST(LexicalTest, TrigramJaccard) {
  // "abcd" -> {abc, bcd}; "bcde" -> {bcd, cde}; 1 shared of 3.
  EXPECT_NEAR(lexical_hypernymy_score(Entity("abcd"), Entity("bcde")), 1.0 / 3,
              1e-12);
}

TEST(RankTest, Preconditions) {
  LexicalScorer s;
  EXPECT_THROW(rank_under_template(Entity("a"), {}, "<query> <anchor>", s), Error);
  EXPECT_THROW(rank_under_template(Entity("a"), ents({"a", "b"}),
                                   "<query> <anchor>", s),
               Error);
  RankMap one = rank_under_template(Entity("a"), ents({"b"}), "<query> <anchor>", s);
  EXPECT_EQ(one, (RankMap{{"b", 1}}));
}

class BrokenScorer : public ScorerBackend {
 public:
  RankMap rank(const Entity&, std::span<const Entity> c,
               std::string_view) override {
    RankMap m;
    for (const auto& e : c) m[e.key()] = 1;
    return m;
  }
  std::string describe() const override { return "broken"; }
};

TEST(RankTest, NonBijectionIsMalformed) {
  BrokenScorer s;
  try {
    rank_under_template(Entity("a"), ents({"b", "c"}), "<query> <anchor>", s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedResponse);
  }
}

TEST(RankTest, ScoresToRanks) {
  auto c = ents({"b", "c", "d"});
  std::vector<double> p = {0.7, 0.2, 0.1};
  EXPECT_EQ(ranks_from_scores(c, p), (RankMap{{"b", 1}, {"c", 2}, {"d", 3}}));
}

TEST(EnsembleTest, HandDerivedScore) {
  auto c = ents({"a", "b", "c", "d"});
  std::vector<RankMap> ranks = {{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}},
                                {{"a", 4}, {"b", 1}, {"c", 2}, {"d", 3}}};
  ScoreTable t = ensemble_from_ranks(Entity("q"), c, ranks);
  EXPECT_NEAR(t.find(Entity("a"))->score, 0.625, 1e-12);
  EXPECT_NEAR(t.find(Entity("b"))->score, 0.75, 1e-12);
  EXPECT_NEAR(t.find(Entity("d"))->score, (0.25 + 1.0 / 3) / 2, 1e-12);
  EXPECT_EQ(t.rows.front().candidate, Entity("b"));
  EXPECT_EQ(t.find(Entity("b"))->rank, 1);
  EXPECT_EQ(t.find(Entity("a"))->template_ranks, (std::vector<int>{1, 4}));
}

TEST(EnsembleTest, LastEverywhereIsOneOverN) {
  auto c = ents({"a", "b", "c", "d", "e"});
  testing::FunctionScorer s([](const Entity&, const Entity& a) {
    return a.key() == "e" ? -1.0 : 1.0;
  });
  ScoreTable t = ensemble_score(Entity("q"), c, TemplateSet::defaults(), s);
  EXPECT_NEAR(t.find(Entity("e"))->score, 1.0 / 5, 1e-12);
  EXPECT_EQ(t.find(Entity("e"))->rank, 5);
  EXPECT_EQ(s.calls, 6);
}

TEST(EnsembleTest, SingleCandidateScoresOne) {
  LexicalScorer s;
  ScoreTable t = ensemble_score(Entity("q"), ents({"a"}), TemplateSet::defaults(), s);
  EXPECT_NEAR(t.rows.at(0).score, 1.0, 1e-12);
}

TEST(EnsembleTest, TemplatePermutationInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 15), m_dist(1, 8);
    const int n = n_dist(rng), m = m_dist(rng);
    std::vector<Entity> c;
    for (int i = 0; i < n; ++i) c.emplace_back("c" + std::to_string(i));
    std::vector<RankMap> ranks;
    for (int j = 0; j < m; ++j) {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i + 1;
      std::shuffle(perm.begin(), perm.end(), rng);
      RankMap r;
      for (int i = 0; i < n; ++i) r[c[i].key()] = perm[i];
      ranks.push_back(r);
    }
    ScoreTable base = ensemble_from_ranks(Entity("q"), c, ranks);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    ScoreTable shuffled = ensemble_from_ranks(Entity("q"), c, ranks);
    for (const auto& row : base.rows) {
      const auto* other = shuffled.find(row.candidate);
      ASSERT_NE(other, nullptr);
      ASSERT_EQ(other->score, row.score);
      ASSERT_EQ(other->rank, row.rank);
    }
  }
}

TEST(EnsembleTest, ScaleInvariance) {
  auto c = ents({"fly", "moth", "insect", "beetle"});
  auto raw = [](const Entity& q, const Entity& a) {
    return lexical_hypernymy_score(q, a) + a.key().size() * 0.01;
  };
  testing::FunctionScorer s1(raw);
  testing::FunctionScorer s2(
      [&](const Entity& q, const Entity& a) { return 7.5 * raw(q, a); });
  auto t1 = ensemble_score(Entity("green fly"), c, TemplateSet::defaults(), s1);
  auto t2 = ensemble_score(Entity("green fly"), c, TemplateSet::defaults(), s2);
  for (const auto& row : t1.rows) {
    EXPECT_EQ(t2.find(row.candidate)->score, row.score);
    EXPECT_EQ(t2.find(row.candidate)->rank, row.rank);
  }
}

// maneuver gold with every layer-3 edge freshly added.
struct LayerFixture {
  Taxonomy t;
  EntityPool pool;
  std::vector<Edge> added;
};

LayerFixture maneuver_layer3() {
  Taxonomy full = outline_to_taxonomy(parse_outline(
      "1. maneuver\n1.1 straight-arm\n1.2 flight maneuver\n1.2.1 loop\n"
      "1.2.1.1 inside loop\n1.2.1.2 outside loop\n1.2.2 slip\n1.2.3 bank\n"
      "1.2.3.1 chandelle\n1.2.3.2 vertical bank\n1.2.4 roll\n"
      "1.2.4.1 barrel roll\n1.2.4.2 snap roll\n1.3 clinch").outline);
  LayerFixture f{full.truncated(3), EntityPool(full.nodes()), {}};
  for (const auto& n : full.truncated(2).nodes()) {
    if (n == full.root()) {
      f.pool.place(n);
    } else {
      f.pool.select(n);
    }
  }
  f.pool.commit();
  for (const auto& n : f.t.nodes()) {
    if (f.t.depth_of(n) == 2) {
      f.added.push_back({*f.t.parent_of(n), n});
      f.pool.select(n);
    }
  }
  return f;
}

double gold_parent_first(const Taxonomy& gold, const Entity& q,
                         const Entity& a) {
  auto p = gold.parent_of(q);
  return p && *p == a ? 1.0 : 0.5;
}

TEST(FilterTest, OracleKeepsEverything) {
  LayerFixture f = maneuver_layer3();
  testing::FunctionScorer s([&](const Entity& q, const Entity& a) {
    return gold_parent_first(f.t, q, a);
  });
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s);
  EXPECT_EQ(r.taxonomy, f.t);
  EXPECT_EQ(r.pool.selected(), f.pool.selected());
  EXPECT_EQ(r.report.kept_edges().size(), 4u);
  EXPECT_TRUE(r.report.removed_edges().empty());
  for (const auto& d : r.report.decisions) {
    EXPECT_EQ(d.rank, 1);
    EXPECT_EQ(d.candidates, 13u);
  }
}

TEST(FilterTest, AdversarialRankRemovesAndRequeues) {
  LayerFixture f = maneuver_layer3();
  // For roll: gold parent and ten others tie above, then flight maneuver,
  // then clinch last -> flight maneuver is 12th of 13.
  testing::FunctionScorer s([&](const Entity& q, const Entity& a) {
    if (q.key() == "roll") {
      if (a.key() == "flight maneuver") return 0.1;
      if (a.key() == "clinch") return 0.0;
      if (a.key() == "maneuver") return 1.0;
      return 0.5;
    }
    return gold_parent_first(f.t, q, a);
  });
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s);
  auto removed = r.report.removed_edges();
  ASSERT_EQ(removed.size(), 1u);
  EXPECT_EQ(removed[0].child, Entity("roll"));
  const FilterDecision* d = nullptr;
  for (const auto& x : r.report.decisions) {
    if (x.edge.child == Entity("roll")) d = &x;
  }
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->rank, 12);
  EXPECT_FALSE(d->kept);
  EXPECT_FALSE(r.taxonomy.contains(Entity("roll")));
  EXPECT_TRUE(r.pool.is_remaining(Entity("roll")));
  EXPECT_EQ(r.report.detached, ents({"roll"}));
  for (const auto& x : r.report.decisions) {
    EXPECT_EQ(x.kept, x.rank <= 10);
  }
}

TEST(FilterTest, RemovalCascadesThroughSameLayerChildren) {
  LayerFixture f = maneuver_layer3();
  Taxonomy t = f.t;
  EntityPool pool = f.pool;
  std::vector<Edge> added = f.added;
  t.add_leaf(Entity("roll"), Entity("barrel roll"));
  pool.select(Entity("barrel roll"));
  added.push_back({Entity("roll"), Entity("barrel roll")});
  testing::FunctionScorer s([&](const Entity& q, const Entity& a) {
    if (q.key() == "roll") return a.key() == "flight maneuver" ? -1.0 : 0.5;
    return a.key() == "roll" || a == *t.parent_of(q) ? 1.0 : 0.5;
  });
  FilterResult r = filter_layer(t, added, pool, TemplateSet::defaults(), s);
  EXPECT_FALSE(r.taxonomy.contains(Entity("barrel roll")));
  EXPECT_FALSE(r.taxonomy.contains(Entity("roll")));
  EXPECT_TRUE(r.pool.is_remaining(Entity("barrel roll")));
  ASSERT_EQ(r.report.removed_edges().size(), 1u);
  bool cascaded = false;
  for (const auto& d : r.report.decisions) {
    if (d.edge.child == Entity("barrel roll")) cascaded = d.cascaded && !d.kept;
  }
  EXPECT_TRUE(cascaded);
}

TEST(FilterTest, DropInsteadOfRequeue) {
  LayerFixture f = maneuver_layer3();
  testing::FunctionScorer s([](const Entity& q, const Entity& a) {
    if (a.key() != "flight maneuver") return 0.0;
    return q.key() == "slip" ? -1.0 : 1.0;
  });
  FilterOptions o;
  o.top_k = 3;
  o.requeue = false;
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s, o);
  EXPECT_EQ(r.pool.dropped(), ents({"slip"}));
}

TEST(FilterTest, SmallPoolNeverRemoves) {
  Taxonomy t(Entity("a"));
  t.add_leaf(Entity("a"), Entity("b"));
  EntityPool pool(ents({"a", "b", "c"}));
  pool.place(Entity("a"));
  pool.select(Entity("b"));
  testing::FunctionScorer s([](const Entity&, const Entity& a) {
    return a.key() == "a" ? -5.0 : 1.0;
  });
  std::vector<Edge> added = {{Entity("a"), Entity("b")}};
  FilterResult r = filter_layer(t, added, pool, TemplateSet::defaults(), s);
  EXPECT_TRUE(r.report.removed_edges().empty());
  EXPECT_EQ(r.report.decisions[0].rank, 2);
}

TEST(FilterTest, PlacedNodePool) {
  LayerFixture f = maneuver_layer3();
  LexicalScorer s;
  FilterOptions o;
  o.pool = CandidatePool::kPlacedNodes;
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s, o);
  for (const auto& d : r.report.decisions) EXPECT_EQ(d.candidates, 7u);
}

TEST(FilterTest, FailsOpenWhenScorerDown) {
  LayerFixture f = maneuver_layer3();
  testing::DownScorer s;
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s);
  EXPECT_TRUE(r.report.skipped);
  EXPECT_FALSE(r.report.skip_reason.empty());
  EXPECT_EQ(r.taxonomy, f.t);
  EXPECT_EQ(r.report.kept_edges().size(), 4u);
}

TEST(FilterTest, RejectsUnknownEdges) {
  LayerFixture f = maneuver_layer3();
  LexicalScorer s;
  std::vector<Edge> bogus = {{Entity("maneuver"), Entity("loop")}};
  EXPECT_THROW(filter_layer(f.t, bogus, f.pool, TemplateSet::defaults(), s), Error);
}

TEST(FilterTest, ConservesEntities) {
  std::mt19937_64 rng(9);
  LayerFixture f = maneuver_layer3();
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> u(0, 1);
    std::map<std::pair<std::string, std::string>, double> table;
    testing::FunctionScorer s([&](const Entity& q, const Entity& a) {
      auto key = std::make_pair(q.key(), a.key());
      if (!table.count(key)) table[key] = u(rng);
      return table[key];
    });
    FilterOptions o;
    o.top_k = 1 + trial % 12;
    FilterResult r =
        filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s, o);
    std::set<std::string> seen;
    for (const auto& n : r.taxonomy.nodes()) seen.insert(n.key());
    for (const auto& n : r.pool.remaining()) {
      ASSERT_TRUE(seen.insert(n.key()).second);
    }
    for (const auto& n : r.pool.dropped()) {
      ASSERT_TRUE(seen.insert(n.key()).second);
    }
    ASSERT_EQ(seen.size(), f.pool.all().size());
  }
}

TEST(RemoteScorerTest, ParsesPerTemplateRanks) {
  testing::MockServer mock;
  json seen;
  mock.server().Post("/rank", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    seen = json::parse(req.body);
    json ranks, probs;
    for (const auto& t : seen["templates"]) {
      std::string key = t.get<std::string>();
      ranks[key] = {{"Clinch", 2}, {"roll", 1}, {"slip", 3}};
      probs[key] = {{"Clinch", 0.2}, {"roll", 0.7}, {"slip", 0.1}};
    }
    res.set_content(json{{"per_template_ranks", ranks},
                         {"probabilities", probs}}.dump(),
                    "application/json");
  });
  mock.start();
  RemoteScorerConfig c;
  c.endpoint_url = mock.url("/rank");
  RemoteMlmScorer s(c);
  auto cands = ents({"Clinch", "roll", "slip"});
  RankMap r = rank_under_template(Entity("barrel roll"), cands,
                                  "<query> is a kind of <anchor>", s);
  EXPECT_EQ(r, (RankMap{{"clinch", 2}, {"roll", 1}, {"slip", 3}}));
  EXPECT_EQ(seen["query"], "barrel roll");
  EXPECT_EQ(seen["candidates"][0], "Clinch");
  EXPECT_EQ(seen["templates"].size(), 1u);

  ScoreTable t = ensemble_score(Entity("barrel roll"), cands,
                                TemplateSet::defaults(), s);
  EXPECT_EQ(seen["templates"].size(), 6u);
  EXPECT_NEAR(t.find(Entity("roll"))->score, 1.0, 1e-12);
}

TEST(RemoteScorerTest, ErrorMapping) {
  testing::MockServer mock;
  std::atomic<int> hits{0};
  mock.server().Post("/bad", [](const httplib::Request&, httplib::Response& res) {
    res.status = 422;
  });
  mock.server().Post("/down", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  mock.server().Post("/junk", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"per_template_ranks": {"<query> <anchor>": {"zzz": 1}}})",
                    "application/json");
  });
  mock.start();
  auto code_of = [&](const std::string& path) {
    RemoteScorerConfig c;
    c.endpoint_url = mock.url(path);
    c.backoff_base_seconds = 0;
    RemoteMlmScorer s(c);
    try {
      s.rank(Entity("q"), ents({"a"}), "<query> <anchor>");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParseError;
  };
  EXPECT_EQ(code_of("/bad"), ErrorCode::kPrecondition);
  EXPECT_EQ(code_of("/down"), ErrorCode::kScorerUnavailable);
  EXPECT_EQ(hits.load(), 3);
  EXPECT_EQ(code_of("/junk"), ErrorCode::kMalformedResponse);
}

TEST(RemoteScorerTest, UnreachableFailsOpenInFilter) {
  RemoteScorerConfig c;
  c.endpoint_url =
      "http://127.0.0.1:" + std::to_string(testing::closed_port()) + "/rank";
  c.retry_count = 0;
  c.timeout_seconds = 1;
  RemoteMlmScorer s(c);
  LayerFixture f = maneuver_layer3();
  FilterResult r = filter_layer(f.t, f.added, f.pool, TemplateSet::defaults(), s);
  EXPECT_TRUE(r.report.skipped);
  EXPECT_EQ(r.taxonomy, f.t);
}

}  // namespace
}  // namespace colt
