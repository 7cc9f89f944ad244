#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ssaf/bbn_oracle.hpp"
#include "ssaf/impact.hpp"
#include "support/random_networks.hpp"
#include "support/seed.hpp"

namespace ssaf {
namespace {

using bbn::State;

const std::vector<std::string> kSeedSafety{"A2.6", "A2.13a", "A2.13b", "A2.13c", "A2.14", "A2.15"};

TEST(GenerateReport, SeedNoEvidence) {
  const Model m = testing::seed_model();
  const ImpactReport r = generate_report(m.network, {}, Machine{}, m.catalog);
  const auto oracle = bbn::brute_force_marginals(m.network, {});
  EXPECT_NEAR(r.state_probabilities.at(SafetyState::S1), oracle.violated("S1-indicator"), 1e-12);
  EXPECT_EQ(r.state_probabilities.at(SafetyState::S2), 0.0);
  EXPECT_EQ(r.state_probabilities.at(SafetyState::S3), 0.0);
  EXPECT_EQ(r.machine_state, SafetyState::S0);
  EXPECT_TRUE(r.violated_classes.empty());
  EXPECT_EQ(r.affected_safety_requirements.at(SafetyState::S1), kSeedSafety);
  EXPECT_TRUE(r.affected_safety_requirements.at(SafetyState::S2).empty());
}

TEST(GenerateReport, SeedTimeStampViolation) {
  const Model m = testing::seed_model();
  const bbn::Evidence e{{"FPT_STM", State::Violated}};
  const ImpactReport base = generate_report(m.network, {}, Machine{}, m.catalog);
  const ImpactReport r = generate_report(m.network, e, Machine{}, m.catalog);
  const auto oracle = bbn::brute_force_marginals(m.network, e);
  EXPECT_NEAR(r.state_probabilities.at(SafetyState::S1), oracle.violated("S1-indicator"), 1e-9);
  EXPECT_GT(r.state_probabilities.at(SafetyState::S1), base.state_probabilities.at(SafetyState::S1));
  EXPECT_EQ(r.state_probabilities.at(SafetyState::S2), 0.0);
  EXPECT_EQ(r.state_probabilities.at(SafetyState::S3), 0.0);
  EXPECT_EQ(r.violated_classes, std::set<std::string>{"FPT_STM"});
  ASSERT_EQ(r.recommendation.size(), 1u);
  EXPECT_EQ(r.recommendation[0].state, SafetyState::S1);
  EXPECT_EQ(r.recommendation[0].types, (std::vector<ReqType>{ReqType::ResourceUse, ReqType::Timing}));
  EXPECT_EQ(r.recommendation[0].classes, std::vector<std::string>{"FPT_STM"});
}

TEST(GenerateReport, ProbabilitiesAreIndicatorPosteriorsExactly) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto rm = testing::random_three_layer(rng);
    const auto e = testing::random_evidence(rng, rm.network, 0.3, true);
    bbn::Posterior post;
    try {
      post = bbn::posterior_marginals(rm.network, e);
    } catch (const InferenceError&) {
      continue;
    }
    const auto r = generate_report(rm.network, e, Machine{}, rm.catalog);
    for (SafetyState s : kViolationStates) {
      const std::string id = indicator_node_id(s);
      EXPECT_EQ(r.state_probabilities.at(s), rm.network.contains(id) ? post.violated(id) : 0.0);
      std::vector<std::string> expected;
      for (ReqType t : types_in(s))
        for (const auto& x : rm.catalog.safety_ids_of(t)) expected.push_back(x);
      EXPECT_EQ(r.affected_safety_requirements.at(s), expected);
    }
  }
}

TEST(GenerateReport, PropagatesInferenceErrors) {
  Model m = testing::seed_model();
  EXPECT_THROW(generate_report(m.network, {{"NOPE", State::Violated}}, Machine{}, m.catalog), NotFoundError);
  LinkDocument zero = testing::seed_links();
  zero.params.leaf_prior = 0.0;
  const Model z = Model::compile(testing::seed_catalog(), zero);
  EXPECT_THROW(generate_report(z.network, {{"FPT_STM", State::Violated}}, Machine{}, z.catalog),
               InferenceError);
}

ImpactReport with_probabilities(double s1, double s2, double s3) {
  ImpactReport r;
  r.state_probabilities = {{SafetyState::S1, s1}, {SafetyState::S2, s2}, {SafetyState::S3, s3}};
  return r;
}

std::vector<SafetyState> states(const std::vector<Recommendation>& recs) {
  std::vector<SafetyState> out;
  for (const auto& r : recs) out.push_back(r.state);
  return out;
}

TEST(Recommend, Ordering) {
  EXPECT_EQ(states(recommend(with_probabilities(0.3, 0.3, 0.3))),
            (std::vector<SafetyState>{SafetyState::S2, SafetyState::S1, SafetyState::S3}));
  EXPECT_EQ(states(recommend(with_probabilities(0.9, 0.0, 0.1))),
            (std::vector<SafetyState>{SafetyState::S1, SafetyState::S3}));
  EXPECT_TRUE(recommend(with_probabilities(0, 0, 0)).empty());
  ImpactReport custom = with_probabilities(0.1, 0.2, 0.3);
  custom.severity = SeverityOrder({SafetyState::S3, SafetyState::S1, SafetyState::S2});
  EXPECT_EQ(states(recommend(custom)),
            (std::vector<SafetyState>{SafetyState::S3, SafetyState::S1, SafetyState::S2}));
}

TEST(WhatIf, IdentityAntisymmetryAndSign) {
  const Model m = testing::seed_model();
  const bbn::Evidence none, rsa{{"FRU_RSA", State::Violated}};
  const WhatIfDiff same = what_if(m.network, rsa, rsa);
  for (const auto& [s, d] : same.state_delta) EXPECT_EQ(d, 0.0);
  for (const auto& [id, d] : same.node_delta) EXPECT_EQ(d, 0.0);

  const WhatIfDiff fwd = what_if(m.network, none, rsa);
  const auto base = bbn::brute_force_marginals(m.network, none);
  const auto alt = bbn::brute_force_marginals(m.network, rsa);
  EXPECT_GT(fwd.state_delta.at(SafetyState::S1), 0.0);
  EXPECT_NEAR(fwd.state_delta.at(SafetyState::S1),
              alt.violated("S1-indicator") - base.violated("S1-indicator"), 1e-9);

  const WhatIfDiff back = what_if(m.network, rsa, none);
  for (const auto& [id, d] : fwd.node_delta) EXPECT_EQ(back.node_delta.at(id), -d);
  for (const auto& [s, d] : fwd.state_delta) EXPECT_EQ(back.state_delta.at(s), -d);
}

TEST(Report, JsonAndText) {
  const Model m = testing::seed_model();
  Machine machine;
  machine.apply({EventKind::Violation, "A2.13a", 1}, m.catalog);
  const ImpactReport r = generate_report(m.network, {{"FPT_STM", State::Violated}}, machine, m.catalog);
  const auto j = to_json(r);
  EXPECT_EQ(j["machine_state"], "S1");
  EXPECT_EQ(j["state_probabilities"]["S1"].get<double>(), r.state_probabilities.at(SafetyState::S1));
  EXPECT_EQ(j["affected_safety_requirements"]["S1"].size(), 6u);
  EXPECT_EQ(j["recommendation"][0]["state"], "S1");
  EXPECT_TRUE(j.contains("note"));
  const std::string text = render_text(r);
  EXPECT_NE(text.find("Machine state: S1"), std::string::npos);
  EXPECT_NE(text.find("A2.13a"), std::string::npos);
  EXPECT_NE(text.find("need not sum to 1"), std::string::npos);
}

}  // namespace
}  // namespace ssaf
