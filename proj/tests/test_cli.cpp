#include "cli_support.hpp"

#include <netrecon/cli.hpp>

#include <gtest/gtest.h>

#include <fstream>

using namespace netrecon;
using namespace netrecon::testkit;

namespace {

struct DemoCase {
  const char* name;
  int exit_code;
};

const DemoCase kDemos[] = {
    {"glv-five-species", 0},           {"steady-state-sign", 0}, {"steady-state-identity", 2},
    {"discrete-weights", 0},   {"pe-identity", 0},       {"pe-survival", 0},
    {"orbit-flip", 0},         {"indistinguishable", 2}, {"adjacency-uncertain", 0},
};

}  // namespace

TEST(Cli, DemosExitWithDocumentedCodes) {
  const fs::path dir = scratch_dir("demos");
  for (const auto& d : kDemos) {
    const fs::path out = dir / d.name;
    const auto r = run_cli(std::string("demo ") + d.name + " --out \"" + out.string() + "\"", dir);
    EXPECT_EQ(r.code, d.exit_code) << d.name << ": " << r.err;
    const Json report = read_json(out / "report.json");
    ASSERT_TRUE(report.contains("tolerances")) << d.name;
    for (const char* key : {"rank", "zero", "consistency"})
      EXPECT_TRUE(report["tolerances"].contains(key)) << d.name << ' ' << key;
    EXPECT_TRUE(report.contains("seed"));
    EXPECT_TRUE(report.contains("command"));
  }
}

TEST(Cli, DemoReportsCarryVerdicts) {
  const fs::path dir = scratch_dir("verdicts");
  ASSERT_EQ(run_cli("demo steady-state-sign --out \"" + (dir / "s").string() + "\"", dir).code, 0);
  const Json sign = read_json(dir / "s" / "report.json");
  EXPECT_EQ(sign["status"], "unique");
  EXPECT_EQ(sign["S"], Json::parse("[[-1.0, 0.0], [1.0, -1.0]]"));
  EXPECT_EQ(sign["nodes"][0]["node"], 1);

  ASSERT_EQ(run_cli("demo indistinguishable --out \"" + (dir / "i").string() + "\"", dir).code, 2);
  const Json amb = read_json(dir / "i" / "report.json");
  EXPECT_EQ(amb["status"], "ambiguous");
  EXPECT_LE(amb["indistinguishable_pair"]["sup_distance"].get<double>(), 1e-9);
  for (const auto& node : amb["nodes"])
    if (node["status"] == "ambiguous") EXPECT_GE(node["witnesses"].size(), 2u);

  ASSERT_EQ(run_cli("demo orbit-flip --out \"" + (dir / "o").string() + "\"", dir).code, 0);
  EXPECT_EQ(slurp(dir / "o" / "flip.csv").substr(0, 31), "delta,size,before,after,flipped");
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const fs::path dir = scratch_dir("determinism");
  for (const char* name : {"steady-state-sign", "pe-survival", "glv-five-species"}) {
    const fs::path a = dir / (std::string(name) + "-a"), b = dir / (std::string(name) + "-b");
    run_cli(std::string("demo ") + name + " --out \"" + a.string() + "\"", dir);
    run_cli(std::string("demo ") + name + " --out \"" + b.string() + "\"", dir);
    const auto ca = directory_contents(a);
    EXPECT_FALSE(ca.empty());
    EXPECT_EQ(ca, directory_contents(b)) << name;
  }
}

TEST(Cli, SeedOverrideIsRecorded) {
  const fs::path dir = scratch_dir("seed");
  ASSERT_EQ(run_cli("demo pe-survival --seed 99 --out \"" + (dir / "o").string() + "\"", dir).code, 0);
  EXPECT_EQ(read_json(dir / "o" / "report.json")["seed"], 99);
}

TEST(Cli, EmptyTrajectoryFileReportsLine) {
  const fs::path dir = scratch_dir("empty");
  write_file(dir / "empty.csv", "");
  write_file(dir / "config.json", R"({"model": {"preset": "glv", "n": 2}, "trajectory": "empty.csv"})");
  const auto r = run_cli("analyze --config \"" + (dir / "config.json").string() + "\" --out \"" +
                             (dir / "o").string() + "\"",
                         dir);
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST(Cli, MalformedConfigReportsLine) {
  const fs::path dir = scratch_dir("badjson");
  write_file(dir / "config.json", "{\n  \"model\": {\n    \"preset\": glv\n  }\n}\n");
  const auto r = run_cli("simulate --config \"" + (dir / "config.json").string() + "\"", dir);
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, BlowupIsReportedAsError) {
  const fs::path dir = scratch_dir("blowup");
  write_file(dir / "config.json", R"({"model": {"preset": "glv", "A": [[1.0]], "r": [1.0], "x0": [1.0],
                                       "horizon": 10.0, "step": 0.01}})");
  const auto r = run_cli("simulate --config \"" + (dir / "config.json").string() + "\" --out \"" +
                             (dir / "o").string() + "\"",
                         dir);
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ZeroMatrixGivesConstantStates) {
  const fs::path dir = scratch_dir("zero");
  write_file(dir / "config.json", R"({"model": {"preset": "linear", "A": [[0, 0], [0, 0]], "x0": [1.5, -2.0],
                                       "horizon": 2.0, "step": 0.1, "input": {"kind": "none"}}})");
  ASSERT_EQ(run_cli("simulate --config \"" + (dir / "config.json").string() + "\" --out \"" +
                        (dir / "o").string() + "\"",
                    dir)
                .code,
            0);
  std::ifstream in(dir / "o" / "trajectory.csv");
  const Trajectory t = read_trajectory(in);
  EXPECT_EQ(t.samples(), 21u);
  for (std::size_t k = 0; k < t.samples(); ++k) EXPECT_EQ(t.state(k), (Vector{{1.5, -2.0}}));
}

TEST(Cli, ReconstructFromTrajectoryFile) {
  const fs::path dir = scratch_dir("fromfile");
  ASSERT_EQ(run_cli("simulate --config \"" + std::string(NETRECON_DEMO_DIR) +
                        "/steady-state-sign.json\" --out \"" + (dir / "sim").string() + "\"",
                    dir)
                .code,
            0);
  write_file(dir / "config.json", R"({"model": {"preset": "glv", "n": 2}, "trajectory": "sim/trajectory.csv",
                                       "prior": {"bounds": {"epsilon": 0.1, "a_min": 1.0, "a_max": 1.2}},
                                       "property": "sign"})");
  const auto r = run_cli("reconstruct --config \"" + (dir / "config.json").string() + "\" --out \"" +
                             (dir / "o").string() + "\"",
                         dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json(dir / "o" / "report.json")["status"], "unique");
}

TEST(Cli, UsageErrors) {
  const fs::path dir = scratch_dir("usage");
  EXPECT_EQ(run_cli("", dir).code, cli::kExitError);
  EXPECT_EQ(run_cli("analyze --config /nonexistent/config.json", dir).code, cli::kExitError);
  const auto unknown = run_cli("demo no-such-demo", dir);
  EXPECT_EQ(unknown.code, cli::kExitError);
  EXPECT_NE(unknown.err.find("steady-state-sign"), std::string::npos) << unknown.err;
  const auto tol = run_cli("demo steady-state-sign --tol-rank 2 --out \"" + (dir / "o").string() + "\"", dir);
  EXPECT_EQ(tol.code, cli::kExitError);
}

TEST(CliConfig, ParsesAndAppliesOverrides) {
  const Json j = Json::parse(R"({"command": "probe", "model": {"preset": "linear", "n": 3},
                                 "probe": {"kind": "orbit-flip", "node": 2, "deltas": [1e-3]},
                                 "tolerances": {"rank": 1e-6}, "seed": 4})");
  cli::RunConfig c = cli::parse_config(j, ".");
  EXPECT_EQ(c.command, "probe");
  EXPECT_EQ(c.probe.node, 1u);
  EXPECT_EQ(c.probe.kind, "orbit-flip");
  EXPECT_DOUBLE_EQ(c.tolerances.rank, 1e-6);
  EXPECT_EQ(c.seed, 4u);
  cli::Overrides o;
  o.seed = 11;
  o.tol_zero = 1e-7;
  o.out = "elsewhere";
  cli::apply(c, o);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_DOUBLE_EQ(c.tolerances.zero, 1e-7);
  EXPECT_DOUBLE_EQ(c.tolerances.rank, 1e-6);
  EXPECT_EQ(c.out, fs::path("elsewhere"));
  EXPECT_THROW(cli::parse_config(Json::parse(R"({"uncertainty": "fuzzy"})"), "."), ParameterError);
  EXPECT_THROW(cli::parse_config(Json::parse(R"({"probe": {"kind": "wobble"}})"), "."), ParameterError);
}
