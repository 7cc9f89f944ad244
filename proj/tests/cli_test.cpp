#include <gtest/gtest.h>

#include "ssaf/model.hpp"
#include "support/process.hpp"
#include "support/seed.hpp"

namespace ssaf {
namespace {

using nlohmann::json;
using testing::data_path;
using testing::run_cli;

const std::string kSeed = data_path("seed/catalog.json") + " " + data_path("seed/links.json");

TEST(Cli, ValidateSeed) {
  const auto r = run_cli("validate " + kSeed);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty()) << r.out;
}

TEST(Cli, ValidateDuplicateId) {
  testing::TempDir dir;
  json doc = to_json(testing::seed_catalog());
  doc["requirements"].push_back(doc["requirements"][0]);
  const auto path = dir.write("catalog.json", doc.dump());
  const auto r = run_cli("validate " + path + " " + data_path("seed/links.json"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1) << r.out;
  EXPECT_NE(r.out.find("A2.6"), std::string::npos);
}

TEST(Cli, ValidateMissingOrMalformedFile) {
  EXPECT_EQ(run_cli("validate /nonexistent/catalog.json " + data_path("seed/links.json")).exit_code, 2);
  testing::TempDir dir;
  const auto bad = dir.write("bad.json", "{\"requirements\": [");
  EXPECT_EQ(run_cli("validate " + bad + " " + data_path("seed/links.json")).exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
}

TEST(Cli, CompileIsDeterministic) {
  const auto a = run_cli("compile " + kSeed);
  const auto b = run_cli("compile " + kSeed);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  const NetworkSpec spec = load_network_spec(json::parse(a.out));
  EXPECT_EQ(spec, testing::seed_model().spec);
}

TEST(Cli, InferEmptyScenario) {
  const auto r = run_cli("infer " + kSeed + " " + data_path("scenarios/empty.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["machine_state"], "S0");
}

TEST(Cli, InferWithOracle) {
  const auto r = run_cli("infer --oracle " + kSeed + " " + data_path("scenarios/fpt_stm_violated.json"));
  ASSERT_EQ(r.exit_code, 0);
  const auto report = json::parse(r.out);
  const Model m = testing::seed_model();
  const double expected =
      bbn::posterior_marginals(m.network, {{"FPT_STM", bbn::State::Violated}}).violated("S1-indicator");
  EXPECT_EQ(report["state_probabilities"]["S1"].get<double>(), expected);
}

TEST(Cli, InferUnknownClass) {
  testing::TempDir dir;
  const auto s = dir.write("s.json", R"({"evidence":{"FXX_YYY":"violated"}})");
  EXPECT_EQ(run_cli("infer " + kSeed + " " + s).exit_code, 1);
}

TEST(Cli, Simulate) {
  auto r = run_cli("simulate " + kSeed + " " + data_path("scenarios/timing_violation_resolved.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "{\"kind\":\"Violation\",\"requirement\":\"A2.13a\",\"seq\":1,\"state\":\"S1\"}\n"
            "{\"kind\":\"Resolution\",\"requirement\":\"A2.13a\",\"seq\":2,\"state\":\"S0\"}\n");

  r = run_cli("simulate " + kSeed + " " + data_path("scenarios/empty.json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());

  testing::TempDir dir;
  const auto s = dir.write("s.json", R"({"events":[{"kind":"Resolution","requirement_id":"A2.13a"}]})");
  const std::string cmd = std::string(SSAF_CLI_PATH) + " simulate " + kSeed + " " + s + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[512] = {};
  const std::size_t n = fread(buf, 1, sizeof buf - 1, pipe);
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 1);
  EXPECT_NE(std::string(buf, n).find("event 1"), std::string::npos) << std::string(buf, n);
}

TEST(Cli, HumanReport) {
  const auto r = run_cli("report " + kSeed + " " + data_path("scenarios/timing_violation_resolved.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("Machine state: S0"), std::string::npos);
  EXPECT_NE(r.out.find("FPT_STM"), std::string::npos);
}

}  // namespace
}  // namespace ssaf
