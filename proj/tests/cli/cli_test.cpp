#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("urykit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    write("s.json", R"({"points":["x","y","z"],"dist":[["0","1","2"],["1","0","1"],["2","1","0"]]})");
    write("star.json",
          R"({"points":["x","w","y","z"],"dist":[["0","1","1","1"],["1","0","2","2"],["1","2","0","2"],["1","2","2","0"]]})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Outcome run(const std::string& args, const std::string& env = "") {
    const std::string cmd = "cd " + dir_.string() + " && " + env + " " + URYKIT_CLI + " " + args + " 2>/dev/null";
    Outcome r;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, ValidateExitCodes) {
  write("bad.json", R"({"points":["x","y","z"],"dist":[["0","1","3"],["1","0","1"],["3","1","0"]]})");
  write("asym.json", R"({"points":["x","y"],"dist":[["0","1"],["2","0"]]})");
  write("broken.json", R"({"points":["x","y"],)");
  EXPECT_EQ(run("validate --space s.json").code, 0);
  EXPECT_EQ(run("validate --space bad.json").code, 2);
  EXPECT_EQ(run("validate --space asym.json").code, 1);
  EXPECT_EQ(run("validate --space broken.json").code, 1);
  EXPECT_EQ(run("validate --space missing.json").code, 1);
  EXPECT_EQ(run("validate").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(Cli, ValidateMap) {
  write("f.json", R"({"domain":["x","z"],"values":["1","1"]})");
  write("g.json", R"({"domain":["x","z"],"values":["5","1"]})");
  EXPECT_EQ(run("validate --space s.json --map f.json").code, 0);
  EXPECT_EQ(run("validate --space s.json --map g.json").code, 2);
}

TEST_F(Cli, ExtendEmitsJointMatrix) {
  write("F.json", R"({"points":["a1","a2"],"dist":[["0","1"],["1","0"]]})");
  write("spec.json", R"({"cross":[["1","1","1"],["2","1","1"]]})");
  const Outcome r = run("extend --space s.json --pattern F.json --spec spec.json --check-b");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["dist"][3][4], "1");
  EXPECT_EQ(j["dist"][0][4], "2");
  EXPECT_EQ(j["audits"]["condition_b"], "ok");
  write("bad_spec.json", R"({"cross":[["5","1","1"],["2","1","1"]]})");
  EXPECT_EQ(run("extend --space s.json --pattern F.json --spec bad_spec.json").code, 2);
}

TEST_F(Cli, RealizeAndBackForth) {
  write("f.json", R"({"domain":["x"],"values":["1"]})");
  const Outcome r = run("realize --space s.json --map f.json --out g.json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["distances"]["z"], "3");
  EXPECT_TRUE(j["new"].get<bool>());
  EXPECT_EQ(run("validate --space g.json").code, 0);

  write("phi.json", R"({"domain":["x"],"range":["z"],"fixed":"None"})");
  const Outcome b = run("backforth --space s.json --phi phi.json --forth y --back y");
  ASSERT_EQ(b.code, 0);
  // y is equidistant from x and z, so it is its own image and already in the range.
  const json iso = json::parse(b.out)["isometry"];
  EXPECT_EQ(iso["domain"], json({"x", "y"}));
  EXPECT_EQ(iso["range"], json({"z", "y"}));
  // Nothing lies at distance 2 from y, so the preimage of z is new.
  write("phi2.json", R"({"domain":["y"],"range":["x"],"fixed":"None"})");
  const Outcome c = run("backforth --space s.json --phi phi2.json --back z");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(json::parse(c.out)["added_points"], 1);
  write("nonphi.json", R"({"domain":["x","y"],"range":["x","z"],"fixed":"None"})");
  EXPECT_EQ(run("backforth --space s.json --phi nonphi.json --forth z").code, 2);
}

TEST_F(Cli, UrysohnGenIsDeterministicAndHonorsEnvSeed) {
  ASSERT_EQ(run("urysohn-gen --distances 1,2 --rounds 2 --cap 2 --seed 42 --out a.json").code, 0);
  ASSERT_EQ(run("urysohn-gen --distances 1,2 --rounds 2 --cap 2 --seed 42 --out b.json").code, 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  const Outcome env = run("urysohn-gen --distances 1,2 --rounds 1 --cap 1 --seed 3", "URYKIT_SEED=42");
  EXPECT_EQ(json::parse(env.out)["seed"], 42);
  EXPECT_EQ(run("urysohn-gen --distances 1,2 --rounds 1", "URYKIT_SEED=nope").code, 1);
  EXPECT_EQ(run("urysohn-gen --distances 1,2 --rounds 3 --cap 2 --max-points 5").code, 2);
  EXPECT_EQ(run("urysohn-gen --distances 1,x").code, 1);
}

TEST_F(Cli, Homotopy) {
  write("t0.json", R"(["x","y"])");
  write("t1.json", R"(["y","z"])");
  write("V.json", R"({"anchors":[{"index":0,"target":"x","radius":"2"}]})");
  const Outcome r = run("homotopy --space s.json --phi0 t0.json --phi1 t1.json --grid 4 --open-set V.json --out p.json");
  ASSERT_EQ(r.code, 0);
  const json p = json::parse(read("p.json"));
  EXPECT_EQ(p["samples"].size(), 5u);
  write("W.json", R"({"anchors":[{"index":0,"target":"z","radius":"1"}]})");
  EXPECT_EQ(run("homotopy --space s.json --phi0 t0.json --phi1 t1.json --open-set W.json").code, 2);
}

TEST_F(Cli, StabilizeAndDisplacement) {
  write("phi.json", R"({"domain":["x","w"],"range":["x","z"],"fixed":"None"})");
  const std::string args = "stabilize --space star.json --A x,w --B x,y --phi phi.json --eps 1/10 --seed 7";
  const Outcome r = run(args + " --trace t1.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["converged"].get<bool>());
  ASSERT_EQ(run(args + " --trace t2.json").code, 0);
  EXPECT_EQ(read("t1.json"), read("t2.json"));
  const json trace = json::parse(read("t1.json"));
  EXPECT_FALSE(trace["iterations"].empty());
  EXPECT_TRUE(trace["iterations"][0].contains("certificate"));

  EXPECT_EQ(run("displacement --space star.json --word t1.json --point y").code, 0);
  EXPECT_EQ(run("displacement --space s.json --word t1.json --point y").code, 2);
  EXPECT_EQ(run("displacement --space star.json --word t1.json --point nowhere").code, 1);

  write("skew.json", R"({"domain":["x","w"],"range":["w","z"],"fixed":"None"})");
  EXPECT_EQ(run("stabilize --space star.json --A x,w --B x,y --phi skew.json").code, 2);
}

TEST_F(Cli, StabilizeReportsIterationCap) {
  // A three-point tuple where a single move does not reach the target.
  write("sp.json", R"({"points":["a","b","c"],"dist":[["0","3","1"],["3","0","2"],["1","2","0"]]})");
  write("phi.json", R"({"domain":["a"],"range":["c"],"fixed":"None"})");
  const Outcome r = run("stabilize --space sp.json --A a --B b --phi phi.json --eps 1/100 --max-iter 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(json::parse(r.out)["converged"].get<bool>());
  EXPECT_EQ(run("stabilize --space sp.json --A a --B b --phi phi.json --eps 1/100").code, 0);
}

TEST_F(Cli, Check) {
  const Outcome a = run("check --suite all --budget 3 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, run("check --suite all --budget 3 --seed 9").out);
  const Outcome zero = run("check --suite all --budget 0");
  EXPECT_EQ(zero.code, 0);
  EXPECT_TRUE(json::parse(zero.out)["results"].empty());
  EXPECT_EQ(run("check --suite nothing").code, 1);
}

}  // namespace
