#include "rankone/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rankone;
using rankone::io::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rankone");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_tmp(const std::string& name, const std::string& body) {
  auto dir = std::filesystem::temp_directory_path() / "rankone_cli_tests";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST(Io, ExplicitScheduleRoundTrip) {
  auto s = io::schedule_from_json(json::parse(
      R"({"initial_height": 2, "initial_width": "1/3", "stages": [{"cuts": 3, "spacers": [0, 1, 2]}, {"cuts": 4, "kind": "HALF_JPRIME"}]})"));
  auto g = derive_geometry(s);
  EXPECT_EQ(g.height(2), 9);
  EXPECT_EQ(g.height(3), 54);
  EXPECT_EQ(g.width(1), Rational(1, 3));
  auto back = io::schedule_from_json(io::schedule_to_json(s));
  EXPECT_EQ(derive_geometry(back).height(3), 54);
}

TEST(Io, GeneratorSpec) {
  auto s = io::schedule_from_json(json::parse(R"({"generator": "paper", "primes": [2, 3], "depth": 6})"));
  EXPECT_EQ(s.tower_count(), 7);
}

TEST(Io, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(io::schedule_from_json(json::parse(R"({"generator": "paper", "prime": [2]})")), ConfigError);
  EXPECT_THROW(io::schedule_from_json(json::parse(R"({"generator": "other"})")), ConfigError);
  EXPECT_THROW(io::schedule_from_json(json::parse(R"({"initial_height": 1, "initial_width": 0.5, "stages": []})")),
               ConfigError);
  EXPECT_THROW(io::cellset_from_json(json::parse(R"({"stage": 0, "levels": [0]})")), ConfigError);
  EXPECT_THROW(io::permutation_from_json(json::parse("[0, 0]")), ConfigError);
}

TEST(Io, CellSetForms) {
  auto a = io::cellset_from_json(json::parse(R"({"stage": 2, "levels": [0, 1, "5"], "ranges": [[7, 9]]})"));
  EXPECT_EQ(a.level_count(), 5);
  auto b = io::cellset_from_json(io::cellset_to_json(a));
  EXPECT_EQ(b.ranges().size(), a.ranges().size());
}

TEST(Cli, GeometryDefault) {
  auto r = run({"geometry"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2,7,1/2,7/2,8,RIGID_J"), std::string::npos);
}

TEST(Cli, RootsOfSixCycle) {
  auto r = run({"roots", "--size", "6", "--k", "3", "--cycle"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("no k-th root"), std::string::npos);
  auto s = run({"roots", "--perm", "[1,0,3,2]", "--k", "2"});
  EXPECT_NE(s.out.find("root of degree 2"), std::string::npos);
}

TEST(Cli, WeakLimitDefaultPasses) {
  auto r = run({"weaklimit"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("all rows pass"), std::string::npos);
}

TEST(Cli, RigidityAndComponentsDefaultPass) {
  EXPECT_EQ(run({"rigidity"}).code, 0);
  EXPECT_EQ(run({"components"}).code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nope"}).code, 2);
  EXPECT_EQ(run({"--config", "/nonexistent.json", "geometry"}).code, 2);
  EXPECT_EQ(run({"--config", write_tmp("bad.json", R"({"frobnicate": 1})"), "geometry"}).code, 2);
  EXPECT_EQ(run({"--tol", "0.5", "correlate"}).code, 2);
  // correlation past the schedule depth
  EXPECT_EQ(run({"--config", write_tmp("deep.json", R"({"n": ["153394387805700352"]})"), "correlate"}).code, 3);
  // a half stage scanned as rigid: the identity check itself is a config error
  EXPECT_EQ(run({"--config", write_tmp("half.json", R"({"stages": [3]})"), "rigidity"}).code, 2);
  // a wrong limit makes every weak-limit row fail
  EXPECT_EQ(run({"--config", write_tmp("wrong.json", R"({"a": "1/3"})"), "weaklimit"}).code, 4);
}

TEST(Cli, OutDirArtifacts) {
  auto dir = std::filesystem::temp_directory_path() / "rankone_cli_out";
  std::filesystem::remove_all(dir);
  auto r = run({"--out", dir.string(), "correlate"});
  ASSERT_EQ(r.code, 0);
  std::ifstream f(dir / "correlation.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), r.out);
}
