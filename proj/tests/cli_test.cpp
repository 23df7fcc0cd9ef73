#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irscov/harness.hpp"
#include "irscov/serialization.hpp"

using namespace irscov;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out; // stdout and stderr
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(IRSCOV_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path work(const std::string& name) {
  const fs::path dir = fs::path(IRSCOV_WORK_DIR) / "cli_work";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(Cli, SweepCoverageSmoke) {
  const auto out = work("r.csv");
  fs::remove(out);
  const auto r = cli("sweep-coverage --preset desk --seed 7 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.rfind("t_p,method,metric,value,seed\n", 0), 0u);
  for (const char* m : {",WALRA,", ",UB,", ",RMS,", ",CSM,", ",ACSM,"}) EXPECT_NE(csv.find(m), std::string::npos) << m;
  EXPECT_TRUE(fs::exists(out.string() + ".json"));
}

TEST(Cli, MismatchedMeasurementFile) {
  const auto r = cli("estimate --input " + std::string(IRSCOV_TEST_DATA_DIR) + "/mismatched_n.json --out " +
                     work("bad.json").string());
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("N=16"), std::string::npos) << r.out;
}

TEST(Cli, PaperPresetEcho) {
  const auto r = cli("show-config --preset paper");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("N=64"), std::string::npos);
  EXPECT_NE(r.out.find("M=128"), std::string::npos);
  EXPECT_NE(r.out.find("K=[9,81]"), std::string::npos);
  EXPECT_NE(r.out.find(",1000]"), std::string::npos);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const auto r = cli("sweep-error --bogus 3");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("Usage"), std::string::npos) << r.out;
  EXPECT_EQ(cli("").code, 1);
}

TEST(Cli, BadConfigIsValidationError) {
  const auto cfg = work("bad_config.json");
  std::ofstream(cfg) << R"({"N": 16, "T_p": [64, 32]})";
  EXPECT_EQ(cli("show-config --config " + cfg.string()).code, 1);
  std::ofstream(cfg) << R"({"N": 16, "colour": "red"})";
  EXPECT_EQ(cli("show-config --config " + cfg.string()).code, 1);
  std::ofstream(cfg) << "{not json";
  EXPECT_EQ(cli("show-config --config " + cfg.string()).code, 1);
}

TEST(Cli, ConfigFileOverridesPreset) {
  const auto cfg = work("config.json");
  std::ofstream(cfg) << R"({"b": 1, "T_p": [40, 80], "K0": 2})";
  const auto r = cli("show-config --config " + cfg.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("b=1"), std::string::npos);
  EXPECT_NE(r.out.find("K=[4]"), std::string::npos);
  EXPECT_NE(r.out.find("T_p=[40,80]"), std::string::npos);
}

// gen-measurements -> estimate must reproduce the in-process estimate exactly.
TEST(Cli, PipelineSeparability) {
  const auto meas = work("meas.json");
  const auto est = work("est.json");
  ASSERT_EQ(cli("gen-measurements --seed 3 --tp 128 --out " + meas.string()).code, 0);
  const auto r = cli("estimate --input " + meas.string() + " --location 2 --D true-rank --out " + est.string());
  ASSERT_EQ(r.code, 0) << r.out;

  ScenarioConfig cfg = desk_preset();
  const Region region = build_region(cfg, 3, 9);
  const auto sets = region_measurements(cfg, region, 3, 128);
  const auto inproc = estimate_region(sets, cfg.walra(), RankPolicy::parse("true-rank"), region.true_ranks);
  const Json j = read_json_file(est.string());
  EXPECT_EQ(estimate_matrix_from_json(j, false), inproc.per_location[2].R);
  EXPECT_EQ(estimate_matrix_from_json(j, true), inproc.per_location[2].R_psd);

  const auto opt = cli("optimize --input " + est.string() + " --out " + work("refl.json").string());
  ASSERT_EQ(opt.code, 0) << opt.out;
  EXPECT_NE(opt.out.find(','), std::string::npos);
}

TEST(Cli, GenChannels) {
  const auto out = work("channels.json");
  ASSERT_EQ(cli("gen-channels --seed 2 --k0 2 --out " + out.string()).code, 0);
  const Json j = read_json_file(out.string());
  ASSERT_EQ(j.at("locations").size(), 4u);
  const auto h = channel_from_json(j.at("locations").at(0));
  EXPECT_EQ(h.L(), 8);
  EXPECT_EQ(h.N(), 16);
}

TEST(Cli, MissingInputIsValidationError) {
  EXPECT_EQ(cli("estimate --input /nonexistent/file.json").code, 1);
}
