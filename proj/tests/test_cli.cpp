#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ribbonlab/cli.hpp"

using namespace ribbonlab;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  std::filesystem::path dir;

  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("ribbonlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir);
    for (const auto& [name, spec] : std::vector<std::pair<std::string, std::string>>{
             {"unknot.rib", "unknot"}, {"trefoil.rib", "spun-trefoil"}, {"torus.rib", "torus:1"},
             {"stab.rib", "stabilized:2:5"}}) {
      const Result r = run({"gen", spec});
      ASSERT_EQ(r.code, 0) << r.err;
      write(name, r.out);
    }
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
};

}  // namespace

TEST_F(Cli, GenPrintsSerializedData) {
  const Result r = run({"gen", "spun-trefoil"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, serialize(spun_trefoil()));
  EXPECT_EQ(run({"gen", "torus:x"}).code, 1);
  EXPECT_EQ(run({"gen", "nonsense"}).code, 1);
}

TEST_F(Cli, Validate) {
  EXPECT_EQ(run({"validate", path("trefoil.rib")}).out, "ok\n");
  write("bad.rib", "ribbon 1\ndim 2\nbases 2\nhandle 1 3 :\n");
  const Result bad = run({"validate", path("bad.rib")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 4: base index 3 out of range"), std::string::npos);
  write("garbage.rib", "hello\n");
  const Result garbage = run({"validate", path("garbage.rib")});
  EXPECT_EQ(garbage.code, 1);
  EXPECT_NE(garbage.err.find("garbage.rib"), std::string::npos);
  EXPECT_EQ(run({"validate", path("missing.rib")}).code, 1);
}

TEST_F(Cli, CanonGenusAlex) {
  const Result canon = run({"canon", path("stab.rib")});
  EXPECT_EQ(canon.code, 0);
  EXPECT_EQ(canon.out, canonical_key(generate("stabilized:2:5")));
  EXPECT_EQ(run({"genus", path("unknot.rib")}).out, "0\n");
  EXPECT_EQ(run({"genus", path("torus.rib")}).out, "1\n");
  EXPECT_EQ(run({"alex", path("trefoil.rib")}).out, "t^2 - t + 1\n");
  EXPECT_EQ(run({"alex", path("stab.rib")}).out, "1\n");
}

TEST_F(Cli, QuandleAndGroupPresentations) {
  EXPECT_EQ(run({"quandle", path("trefoil.rib")}).out, to_string(quandle_presentation(spun_trefoil())));
  EXPECT_EQ(run({"quandle", "--group", path("trefoil.rib")}).out, to_string(group_presentation(spun_trefoil())));
}

TEST_F(Cli, ColorCounts) {
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", "dihedral:3"}).out, "9\n");
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", "dihedral:5"}).out, "5\n");
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", "dihedral:3", "--threads", "3"}).out, "9\n");
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", "dihedral:3", "--quandle", "dihedral:5"}).out,
            "dihedral:3 9\ndihedral:5 5\n");
  EXPECT_EQ(run({"color", path("trefoil.rib")}).code, 1);
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", "dihedral:0"}).code, 1);
}

TEST_F(Cli, ColorListsEveryColoring) {
  const Result r = run({"color", path("trefoil.rib"), "--quandle", "dihedral:3", "--list"});
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "9");
  int listed = 0;
  while (std::getline(lines, line)) ++listed;
  EXPECT_EQ(listed, 9);
}

TEST_F(Cli, QuandleFile) {
  write("r3.qdl", serialize_quandle(dihedral_quandle(3)));
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", path("r3.qdl")}).out, "9\n");
  write("broken.qdl", "quandle 1\nsize 2\n1 1\n1 1\n");
  EXPECT_EQ(run({"color", path("trefoil.rib"), "--quandle", path("broken.qdl")}).code, 1);
}

TEST_F(Cli, ApplyScript) {
  write("walk.script", "stab 1\nstab 1\nslide 2 end 1 rev\n");
  const Result r = run({"apply", path("unknot.rib"), "--script", path("walk.script")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, serialize(apply_script(unknot(), parse_script("stab 1\nstab 1\nslide 2 end 1 rev\n"))));
  write("fail.script", "stab 1\ndestab 3\n");
  const Result fail = run({"apply", path("unknot.rib"), "--script", path("fail.script")});
  EXPECT_EQ(fail.code, 1);
  EXPECT_FALSE(fail.err.empty());
  EXPECT_TRUE(fail.out.empty());
}

TEST_F(Cli, SearchExitCodes) {
  const Result eq = run({"search", path("stab.rib"), path("unknot.rib"), "--depth", "6", "--weak", "0"});
  EXPECT_EQ(eq.code, 0) << eq.out;
  EXPECT_EQ(eq.out.rfind("EQUIVALENT", 0), 0u);

  const Result refuted = run({"search", path("trefoil.rib"), path("unknot.rib"), "--depth", "4", "--weak", "1"});
  EXPECT_EQ(refuted.code, 3);
  EXPECT_EQ(refuted.out.rfind("REFUTED dihedral:3 9 3\n", 0), 0u);

  const Result genus = run({"search", path("torus.rib"), path("unknot.rib"), "--depth", "1", "--weak", "0"});
  EXPECT_EQ(genus.code, 3);
  EXPECT_EQ(genus.out.rfind("REFUTED genus 1 0\n", 0), 0u);

  const Result unknown =
      run({"search", path("stab.rib"), path("unknot.rib"), "--depth", "8", "--weak", "0", "--states", "5"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_EQ(unknown.out.rfind("UNKNOWN ", 0), 0u);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"search", path("stab.rib"), path("unknot.rib"), "--depth", "3"}).code, 1);
  EXPECT_EQ(run({"search", path("stab.rib"), path("unknot.rib"), "--depth", "-1", "--weak", "0"}).code, 1);
  EXPECT_EQ(run({"search", path("stab.rib"), path("unknot.rib"), "--depth", "2", "--weak", "0", "--threads", "0"})
                .code,
            1);
  EXPECT_EQ(run({"apply", path("unknot.rib")}).code, 1);
  const Result help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("search"), std::string::npos);
}
