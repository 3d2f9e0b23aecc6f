#include "spherorb/cli.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace spherorb {
namespace {

using testing::data_path;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, {in, out, err});
  return {code, out.str(), err.str()};
}

TEST(Cli, GenFlagPipesIntoValidate) {
  const auto gen = run({"gen-flag", "A", "2"});
  ASSERT_EQ(gen.code, 0);
  const auto checked = run({"validate"}, gen.out);
  EXPECT_EQ(checked.code, 0);
  EXPECT_EQ(checked.out, "");
  EXPECT_EQ(serialize(parse_datum(gen.out)), gen.out);
}

TEST(Cli, GenFlagRaiseDims) {
  const auto gen = run({"gen-flag", "A", "1", "--raise-dims", "3"});
  ASSERT_EQ(gen.code, 0);
  EXPECT_EQ(parse_datum(gen.out).orbits.back().dim, 3);
}

TEST(Cli, ValidateReportsViolations) {
  auto d = testing::load_datum("rank1_TU.json");
  d.orbits[1].rk = 1;  // z1
  d.orbits[1].lattice = std::nullopt;
  d.orbits[0].lattice = std::nullopt;
  d.orbits[2].lattice = std::nullopt;
  const auto r = run({"validate", "-"}, serialize(d));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("TU rank rule"), std::string::npos);
  const auto j = run({"--json", "validate"}, serialize(d));
  EXPECT_FALSE(Json::parse(j.out)["violations"].empty());
}

TEST(Cli, BraidOnFlagAndCounterexample) {
  EXPECT_EQ(run({"braid"}, run({"gen-flag", "B", "2"}).out).code, 0);
  const auto bad = run({"braid"}, serialize(testing::braid_counterexample()));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("braid violation"), std::string::npos);
  EXPECT_EQ(run({"stabilizer"}, serialize(testing::braid_counterexample())).code, 2);
}

TEST(Cli, ActWord) {
  const auto flag = run({"gen-flag", "A", "1"}).out;
  EXPECT_EQ(run({"act", "-", "0", "e"}, flag).out, "s0\n");
  EXPECT_EQ(run({"act", "-", "0,0", "e"}, flag).out, "e\n");
  EXPECT_EQ(run({"act", "-", "e", "s0"}, flag).out, "s0\n");
  EXPECT_EQ(run({"act", "-", "x", "s0"}, flag).code, 2);
  EXPECT_EQ(run({"act", "-", "0", "nowhere"}, flag).code, 2);
}

TEST(Cli, StabilizerOfRankOneRT) {
  const auto r = run({"stabilizer", data_path("rank1_RT.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("stabilizer order: 2"), std::string::npos);
  EXPECT_NE(r.out.find("generating set: s0\n"), std::string::npos);
  EXPECT_NE(r.out.find("generator theorem: holds"), std::string::npos);
  const auto j = Json::parse(run({"--json", "stabilizer", data_path("pgl2xpgl2.json")}).out);
  EXPECT_EQ(j["order"], 2);
  EXPECT_EQ(j["generating_set"], Json::array({"s0s1"}));
}

TEST(Cli, Hecke) {
  const auto flag = run({"hecke", "--dump"}, run({"gen-flag", "A", "2"}).out);
  EXPECT_EQ(flag.code, 0);
  EXPECT_NE(flag.out.find("regular representation: yes"), std::string::npos);
  EXPECT_NE(flag.out.find("T_0[e] = [s0]"), std::string::npos);
  const auto tu = run({"hecke", "--dump", data_path("rank1_TU.json")});
  EXPECT_EQ(tu.code, 0);
  EXPECT_NE(tu.out.find("T_0[z1] = [z2] + [y]"), std::string::npos);
  EXPECT_NE(tu.out.find("regular representation: n/a"), std::string::npos);
  const auto bad = run({"hecke"}, serialize(testing::braid_counterexample()));
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, ExportDot) {
  const auto r = run({"export-dot", data_path("sl3_so12.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
}

TEST(Cli, Oracle) {
  const auto spec = data_path("oracle/gl2_torus.json");
  const auto e = run({"oracle", "enumerate", spec});
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("q=5 |G|=480"), std::string::npos);
  const auto only7 = run({"--q-list", "7", "oracle", "enumerate", spec});
  EXPECT_EQ(only7.out.find("q=5"), std::string::npos);
  EXPECT_NE(only7.out.find("q=7"), std::string::npos);
  const auto inferred = Json::parse(run({"oracle", "infer", spec}).out);
  EXPECT_EQ(inferred["cells"]["0"][0]["kind"], "RT");
  EXPECT_TRUE(inferred.contains("confidence"));
  EXPECT_EQ(run({"oracle", "compare", data_path("rank1_RT.json"), spec}).code, 0);
  const auto mismatch = run({"oracle", "compare", data_path("rank1_U.json"), data_path("oracle/gl2_torus_normalizer.json")});
  EXPECT_EQ(mismatch.code, 1);
  EXPECT_NE(mismatch.out.find("kind"), std::string::npos);
  EXPECT_EQ(run({"--cap", "10", "oracle", "enumerate", spec}).code, 2);
  EXPECT_EQ(run({"--q-list", "4", "oracle", "enumerate", spec}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"validate", "--bogus"}).code, 2);
  EXPECT_EQ(run({"validate", "/nonexistent/file.json"}).code, 2);
  EXPECT_EQ(run({"validate"}, "{not json").code, 2);
  EXPECT_EQ(run({"gen-flag", "E", "8"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OutFlag) {
  const auto path = (std::filesystem::temp_directory_path() / "spherorb_cli_out.json").string();
  std::filesystem::remove(path);
  const auto r = run({"--out", path, "gen-flag", "A", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(testing::read_file(path), run({"gen-flag", "A", "1"}).out);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace spherorb
