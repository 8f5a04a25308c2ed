#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ttforge/io.hpp"

namespace ttforge {
namespace {

std::string data(const std::string& name) { return std::string(TTFORGE_DATA_DIR) + "/" + name; }

struct CliRun {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return CliRun{code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ttforge_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

TEST(CliAnalyze, Sigma) {
  const CliRun r = run({"analyze", data("sigma.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["tool_version"], kToolVersion);
  const Json& res = j["result"];
  EXPECT_TRUE(res["train_track"]["train_track"]);
  EXPECT_TRUE(res["expanding"]["expanding"]);
  EXPECT_TRUE(res["irreducible"]["irreducible"]);
  EXPECT_NEAR(res["lambda"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(res["transition_matrix"], Json::parse("[[1,1],[1,1]]"));
  EXPECT_EQ(res["legal_loops"].size(), 2u);
}

TEST(CliAnalyze, IdentityIsNotExpanding) {
  const CliRun r = run({"analyze", data("identity.json")});
  ASSERT_EQ(r.code, 0);
  const Json res = r.json()["result"];
  EXPECT_FALSE(res["expanding"]["expanding"]);
  EXPECT_EQ(res["expanding"]["bounded_edge"], "a");
  EXPECT_EQ(res["invariant_subgraph"], Json::parse(R"(["a"])"));
}

TEST(CliAnalyze, TextFormat) {
  const CliRun r = run({"analyze", data("sigma.json"), "--format", "text"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lambda: 2.0"), std::string::npos);
}

TEST(CliErrors, ExitCodes) {
  EXPECT_EQ(run({"analyze", data("malformed.json")}).code, 1);
  EXPECT_EQ(run({"analyze", data("does_not_exist.json")}).code, 1);
  EXPECT_EQ(run({"analyze"}).code, 1);
  EXPECT_EQ(run({"frobnicate", data("sigma.json")}).code, 1);
  EXPECT_EQ(run({"analyze", data("sigma.json"), "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"analyze", data("nilp.json")}).code, 1);  // no map
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliQuotient, Fixtures) {
  const Json sigma = run({"quotient", data("sigma.json")}).json()["result"];
  EXPECT_EQ(sigma["K"], 1);
  EXPECT_EQ(sigma["rank"], 1);
  EXPECT_EQ(sigma["phi_bar"], Json::parse(R"(["x1 x1"])"));
  const Json fib = run({"quotient", data("fib.json")}).json()["result"];
  EXPECT_EQ(fib["K"], 0);
  EXPECT_EQ(fib["rank"], 2);
  const Json nilp = run({"quotient", data("nilp.json")}).json()["result"];
  EXPECT_EQ(nilp["K"], 3);
  EXPECT_EQ(nilp["rank"], 0);
  EXPECT_EQ(nilp["image_ranks"], Json::parse("[3,2,1,0,0]"));
}

TEST(CliInduce, SigmaPackage) {
  const auto dir = temp_dir("induce_sigma");
  const CliRun r = run({"induce", data("sigma.json"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["result"]["constants"]["K"], 2);
  EXPECT_TRUE(j["result"]["verification"]["passed"]);
  EXPECT_EQ(j["result"]["P"]["edges"]["a"], "a_0 b_0 a_0 b_0");
  for (const char* name : {"theta_bar.json", "fbar.json", "pbar.json", "P.json",
                           "constants.json", "report.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::filesystem::remove_all(dir);
}

TEST(CliInduce, FibIsTrivialCover) {
  const CliRun r = run({"induce", data("fib.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.json()["result"]["constants"]["trivial_cover"]);
}

TEST(CliInduce, RejectsReducible) {
  const CliRun r = run({"induce", data("reducible.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("irreducible"), std::string::npos);
}

TEST(CliSuspend, FlowAndDescriptors) {
  const CliRun sigma = run({"suspend", data("sigma.json"), "--count", "300"});
  ASSERT_EQ(sigma.code, 0) << sigma.err;
  const Json fc = sigma.json()["result"]["flow_checks"];
  EXPECT_EQ(fc["semigroup"]["failures"], 0);
  EXPECT_EQ(fc["flow_homotopy_pair"]["k"], 2);

  const CliRun fib = run({"suspend", data("fib_index2.json")});
  ASSERT_EQ(fib.code, 0) << fib.err;
  const Json res = fib.json()["result"];
  EXPECT_EQ(res["descriptor_checks"]["j"], 3);
  EXPECT_EQ(res["descriptor_checks"]["degree"], 6);
  EXPECT_TRUE(res["descriptor_checks"]["round_trip"]);
  EXPECT_EQ(res["flow"], Json::parse(R"([["edge", "b", 1, 3, 1, 2], ["vertex", "v", 0, 1]])"));

  EXPECT_EQ(run({"suspend", data("fib_descriptor.json"), "--check", "descriptor"}).code, 0);
  EXPECT_EQ(run({"suspend", data("broken_descriptor.json"), "--check", "descriptor"}).code, 2);
}

TEST(CliProptest, DeterministicAcrossJobs) {
  const CliRun a = run({"proptest", "--seed", "11", "--count", "12"});
  const CliRun b = run({"proptest", "--seed", "11", "--count", "12", "--jobs", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.json()["result"]["passed"], 12);
  EXPECT_NE(run({"proptest", "--seed", "12", "--count", "12"}).out, a.out);
}

TEST(CliProptest, EmptyAndAdversarial) {
  const CliRun empty = run({"proptest", "--count", "0"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.json()["result"]["cases"].size(), 0u);
  const CliRun adv = run({"proptest", "--count", "10", "--adversarial"});
  ASSERT_EQ(adv.code, 0) << adv.err;
  EXPECT_EQ(adv.json()["result"]["rejected_as_expected"], 2);
  EXPECT_EQ(adv.json()["result"]["failed"], 0);
}

TEST(CliReport, EmbedsInputHash) {
  std::ifstream in(data("sigma.json"), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(run({"analyze", data("sigma.json")}).json()["input_hash"], fnv1a_hex(ss.str()));
  EXPECT_EQ(run({"induce", data("cyc2.json")}).out, run({"induce", data("cyc2.json")}).out);
}

TEST(CliExportDot, RoseAndPackage) {
  const CliRun rose = run({"export-dot", data("sigma.json")});
  ASSERT_EQ(rose.code, 0);
  EXPECT_EQ(rose.out,
            "digraph \"theta\" {\n  \"v\";\n  \"v\" -> \"v\" [label=\"a\"];\n"
            "  \"v\" -> \"v\" [label=\"b\"];\n}\n");
  const auto dir = temp_dir("dot_sigma");
  ASSERT_EQ(run({"induce", data("sigma.json"), "--out", dir.string()}).code, 0);
  const CliRun pkg = run({"export-dot", dir.string()});
  ASSERT_EQ(pkg.code, 0) << pkg.err;
  EXPECT_EQ(pkg.out,
            "digraph \"theta_bar\" {\n  \"v_0\";\n  \"v_1\";\n"
            "  \"v_0\" -> \"v_1\" [label=\"a_0 / a\"];\n"
            "  \"v_1\" -> \"v_0\" [label=\"b_0 / b\"];\n}\n");
  EXPECT_EQ(run({"export-dot", dir.string()}).out, pkg.out);
  std::filesystem::remove_all(dir);
  EXPECT_EQ(run({"export-dot", data("malformed.json")}).code, 1);
}

}  // namespace
}  // namespace ttforge
