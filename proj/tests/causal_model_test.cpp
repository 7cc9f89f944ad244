#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ssaf/causal_model.hpp"
#include "support/seed.hpp"

namespace ssaf {
namespace {

Condition cond(std::string id, ConditionKind k) { return {std::move(id), k, std::nullopt, ""}; }

TEST(CausalModel, KindFixesDomain) {
  CausalGraph g;
  g.add_condition(cond("V1", ConditionKind::Vulnerability));
  EXPECT_EQ(g.condition("V1").domain, Domain::Security);
  EXPECT_THROW(g.add_condition({"H1", ConditionKind::Hazard, Domain::Security, ""}),
               ValidationError);
  EXPECT_FALSE(g.contains("H1"));
  g.add_condition(cond("F1", ConditionKind::Failure));
  EXPECT_EQ(g.conditions().size(), 2u);
  EXPECT_TRUE(g.relations().empty());
  EXPECT_THROW(g.add_condition(cond("V1", ConditionKind::Threat)), ValidationError);
}

TEST(CausalModel, AdmissibilityCatalogHasEightRows) {
  EXPECT_EQ(kAdmissibility.size(), 8u);
  std::size_t admissible = 0;
  for (auto s : kAllConditionKinds)
    for (auto l : kAllRelationLabels)
      for (auto t : kAllConditionKinds) admissible += is_admissible(s, l, t);
  EXPECT_EQ(admissible, 8u);
  EXPECT_TRUE(is_symmetric(RelationLabel::TradeOff));
  for (auto l : kAllRelationLabels)
    if (l != RelationLabel::TradeOff) EXPECT_FALSE(is_symmetric(l));
}

TEST(CausalModel, AddRelationChecksAdmissibility) {
  CausalGraph g;
  g.add_condition(cond("V1", ConditionKind::Vulnerability));
  g.add_condition(cond("F1", ConditionKind::Failure));
  g.add_condition(cond("H1", ConditionKind::Hazard));
  g.add_relation({"V1", "F1", RelationLabel::Causes, {}, "", false});
  EXPECT_EQ(g.relations().size(), 1u);
  EXPECT_THROW(g.add_relation({"V1", "H1", RelationLabel::Motivates, {}, "", false}),
               ValidationError);
  EXPECT_EQ(g.relations().size(), 1u);
  g.add_relation({"V1", "H1", RelationLabel::Motivates, {}, "site-specific", true});
  EXPECT_EQ(g.relations().size(), 2u);
  EXPECT_THROW(g.add_relation({"V1", "NOPE", RelationLabel::Causes, {}, "", false}),
               NotFoundError);
  EXPECT_THROW(g.add_relation({"V1", "F1", RelationLabel::Causes, "SP9", "", false}),
               NotFoundError);
}

TEST(CausalModel, TradeOffVisibleFromBothEnds) {
  CausalGraph g;
  g.add_condition(cond("SR", ConditionKind::SafetyRequirement));
  g.add_condition(cond("XR", ConditionKind::SecurityRequirement));
  g.add_relation({"SR", "XR", RelationLabel::TradeOff, {}, "latency", false});
  ASSERT_EQ(g.relations().size(), 1u);
  const auto from_sec = g.relations_of("XR");
  ASSERT_EQ(from_sec.size(), 1u);
  EXPECT_EQ(from_sec[0].relation, &g.relations()[0]);
  EXPECT_TRUE(from_sec[0].reversed);
  EXPECT_EQ(from_sec[0].from, "XR");
  EXPECT_EQ(from_sec[0].to, "SR");
  EXPECT_EQ(g.cross_domain_paths("XR", "SR").size(), 1u);
}

TEST(CrossDomainPaths, SingleEdge) {
  CausalGraph g;
  g.add_condition(cond("V1", ConditionKind::Vulnerability));
  g.add_condition(cond("F1", ConditionKind::Failure));
  EXPECT_TRUE(g.cross_domain_paths("V1", "F1").empty());
  g.add_relation({"V1", "F1", RelationLabel::Causes, {}, "", false});
  const auto paths = g.cross_domain_paths("V1", "F1");
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].length(), 1u);
  EXPECT_TRUE(g.cross_domain_paths("F1", "V1").empty());  // Causes is directed
  EXPECT_THROW(g.cross_domain_paths("V1", "Q"), NotFoundError);
}

// Independent oracle: enumerate every sequence of distinct edges up to the
// bound and keep the ones forming a simple walk from `from` to `to`.
std::set<std::vector<std::string>> enumerate_paths(const CausalGraph& g, const std::string& from,
                                                   const std::string& to, std::size_t max_len) {
  struct Arc { std::string a, b; };
  std::vector<Arc> arcs;
  for (const auto& r : g.relations()) {
    arcs.push_back({r.source, r.target});
    if (is_symmetric(r.label)) arcs.push_back({r.target, r.source});
  }
  std::set<std::vector<std::string>> out;
  std::vector<std::vector<std::string>> frontier{{from}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& walk : frontier)
      for (const auto& arc : arcs) {
        if (arc.a != walk.back()) continue;
        if (std::find(walk.begin(), walk.end(), arc.b) != walk.end()) continue;
        auto w = walk;
        w.push_back(arc.b);
        if (arc.b == to) out.insert(w);
        else next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return out;
}

TEST(CrossDomainPaths, VulnerabilityToHazardCrossesOnce) {
  CausalGraph g;
  g.add_condition(cond("V1", ConditionKind::Vulnerability));
  g.add_condition(cond("H1", ConditionKind::Hazard));
  g.add_condition(cond("T1", ConditionKind::Threat));
  g.add_relation({"V1", "H1", RelationLabel::ContributesTo, {}, "", false});
  g.add_relation({"T1", "H1", RelationLabel::SafetyImpact, {}, "", false});
  const auto paths = g.cross_domain_paths("V1", "H1");
  ASSERT_EQ(paths.size(), enumerate_paths(g, "V1", "H1", 8).size());
  ASSERT_EQ(paths.size(), 1u);
  ASSERT_EQ(paths[0].crossings.size(), 1u);
  EXPECT_EQ(paths[0].crossings[0].from, Domain::Security);
  EXPECT_EQ(paths[0].crossings[0].to, Domain::Safety);
}

TEST(CrossDomainPathsProperty, MatchesEnumerationAndStaysSimple) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 150; ++iter) {
    CausalGraph g;
    const std::size_t n = 2 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i)
      g.add_condition(cond("c" + std::to_string(i), kAllConditionKinds[rng() % 9]));
    const std::size_t m = rng() % 12;
    for (std::size_t e = 0; e < m; ++e) {
      const auto& a = g.conditions()[rng() % n];
      const auto& b = g.conditions()[rng() % n];
      if (a.id == b.id) continue;
      g.add_relation({a.id, b.id, kAllRelationLabels[rng() % 7], {}, "", true});
    }
    const std::size_t bound = 1 + rng() % 5;
    const std::string from = "c0", to = "c" + std::to_string(n - 1);
    const auto paths = g.cross_domain_paths(from, to, bound);
    std::set<std::vector<std::string>> got;
    for (const auto& p : paths) {
      EXPECT_LE(p.length(), bound);
      EXPECT_EQ(std::set<std::string>(p.nodes.begin(), p.nodes.end()).size(), p.nodes.size());
      std::size_t crossings = 0;
      for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        crossings += g.condition(p.nodes[i]).domain != g.condition(p.nodes[i + 1]).domain;
      EXPECT_EQ(p.crossings.size(), crossings);
      got.insert(p.nodes);
    }
    // Parallel edges may yield the same node sequence with different labels.
    EXPECT_EQ(got, enumerate_paths(g, from, to, bound));
    for (const auto& r : g.relations()) {
      EXPECT_TRUE(g.contains(r.source));
      EXPECT_TRUE(g.contains(r.target));
    }
  }
}

TEST(CausalModel, SeedGraphFileRoundTrips) {
  const auto doc = json_util::read_file(testing::data_path("seed/causal_model.json"));
  const CausalGraph g = load_causal_graph(doc);
  EXPECT_EQ(g.conditions().size(), 5u);
  EXPECT_EQ(g.relations().size(), 3u);
  const CausalGraph again = load_causal_graph(to_json(g));
  EXPECT_EQ(to_json(again), to_json(g));

  auto bad = doc;
  bad["relations"][0]["weight"] = 1;
  EXPECT_THROW(load_causal_graph(bad), ParseError);
  bad = doc;
  bad["relations"][0]["label"] = "Motivates";
  EXPECT_THROW(load_causal_graph(bad), ValidationError);
}

}  // namespace
}  // namespace ssaf
