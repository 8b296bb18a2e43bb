#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(FRACTALKIT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fractalkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RgReport) {
  auto r = run("perc rg --rule hybrid");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["rule"], "hybrid");
  EXPECT_EQ(j["counts"].size(), 9u);
  EXPECT_EQ(j["counts"][8], 1);
  EXPECT_FALSE(j["notes"].empty());
  auto quoted = json::parse(run("perc rg --counts 0,0,0,8,38,44,27,8,1").out);
  EXPECT_NEAR(quoted["p_c"].get<double>(), 0.5093, 5e-4);
  EXPECT_NEAR(quoted["nu"].get<double>(), 1.801, 5e-3);
  EXPECT_EQ(run("perc rg --counts 1,2,3").code, 2);
}

TEST_F(Cli, CantorWithManifest) {
  auto out = path("c2.csv");
  ASSERT_EQ(run("gen cantor --variant triadic --n 2 --out " + out).code, 0);
  std::string csv = slurp(out);
  EXPECT_EQ(csv, "lo_num,lo_den,hi_num,hi_den\n0,1,1,9\n2,9,1,3\n2,3,7,9\n8,9,1,1\n");
  auto m = json::parse(slurp(out + ".manifest.json"));
  EXPECT_EQ(m["seed"], 0);
  EXPECT_EQ(m["outputs"][0]["bytes"], csv.size());
  EXPECT_TRUE(m["versions"].contains("gmp"));
  EXPECT_FALSE(m["command_line"].empty());
  // Same arguments reproduce the same checksum.
  auto again = path("c2b.csv");
  ASSERT_EQ(run("gen cantor --variant triadic --gen 2 --out " + again).code, 0);
  EXPECT_EQ(json::parse(slurp(again + ".manifest.json"))["outputs"][0]["fnv1a64"], m["outputs"][0]["fnv1a64"]);
}

TEST_F(Cli, Spectrum) {
  auto r = run("mfa spectrum --l1 1/4 --l2 2/5 --p1 0.6 --p2 0.4 --q-min -10 --q-max 10 --q-step 0.5");
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "q,tau,Dq,alpha,f");
  bool seen = false;
  while (std::getline(is, line))
    if (line.rfind("0,", 0) == 0) {
      seen = true;
      double dq = std::stod(line.substr(line.find(',', 2) + 1));
      EXPECT_NEAR(dq, 0.6110, 1e-4);
    }
  EXPECT_TRUE(seen);
  EXPECT_EQ(run("mfa spectrum --p1 0.7 --p2 0.4").code, 2);
}

TEST_F(Cli, CantorFunction) {
  auto j = json::parse(run("cantor-fn eval --x 1/9 --depth 10 --format json").out);
  EXPECT_EQ(j["value"], "1/4");
  auto r = run("cantor-fn staircase --n 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x_num,x_den,y_num,y_den");
  EXPECT_NE(r.out.find("1,3,1,2"), std::string::npos);
  EXPECT_EQ(run("cantor-fn eval --x 3/2").code, 2);
}

TEST_F(Cli, SpongeSliceIsCarpet) {
  auto a = path("slice.pgm"), b = path("carpet.pgm");
  ASSERT_EQ(run("gen sponge --gen 2 --slice 1:0 --out " + a).code, 0);
  ASSERT_EQ(run("gen carpet --base 3 --gen 2 --out " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(run("gen sponge --gen 2 --slice y:0").out, run("gen sponge --gen 2 --slice 1:0").out);
  EXPECT_EQ(run("gen sponge --gen 2 --slice 4:0").code, 2);
  EXPECT_EQ(run("gen sponge --gen 2 --slice w:0").code, 2);
}

TEST_F(Cli, BoxDimensionOfCarpet) {
  auto pgm = path("carpet.pgm");
  ASSERT_EQ(run("gen carpet --gen 5 --out " + pgm).code, 0);
  auto r = run("dim box --in " + pgm + " --base 3 --scales 0..5");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_NEAR(j["dimension"].get<double>(), std::log(8.0) / std::log(3.0), 1e-10);
  EXPECT_EQ(j["r2_acceptable"], true);
}

TEST_F(Cli, Measures) {
  auto h1 = path("half.csv"), h2 = path("uniform.csv");
  {
    std::ofstream a(h1), b(h2);
    a << "bin,count\n";
    b << "bin,count\n";
    for (int i = 0; i < 256; ++i) {
      a << i << ',' << (i < 128 ? 1 : 0) << '\n';
      b << i << ",1\n";
    }
  }
  auto r = run("measure kl --a " + h1 + " --b " + h2);
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["kl"].get<double>(), std::log(2.0), 1e-3);
  auto lac = json::parse(run("measure lacuna1d --variant triadic --n 3").out);
  EXPECT_EQ(lac["largest_gap"], "1/3");
}

TEST_F(Cli, MonteCarloIsDeterministic) {
  auto a = run("--seed 5 perc mc --rule edge --gen 3 --p 0.7 --trials 50");
  auto b = run("--seed 5 perc mc --rule edge --gen 3 --p 0.7 --trials 50");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("perc mc --p 2").code, 2);
  EXPECT_EQ(run("gen cantor --variant nope --n 2").code, 2);
  EXPECT_EQ(run("dim box --in " + path("missing.pgm")).code, 1);
  auto bad = path("bad.pgm");
  std::ofstream(bad) << "P5\n4 4\n255\nxx";
  EXPECT_EQ(run("measure lacuna2d --in " + bad).code, 1);
  EXPECT_EQ(run("gen cantor --variant triadic --n 40").code, 1);
}

TEST_F(Cli, ReproduceFilter) {
  auto r = run("reproduce --filter const");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS  criterion 1"), std::string::npos);
  EXPECT_EQ(r.out.find("criterion 2"), std::string::npos);
  EXPECT_EQ(run("reproduce --filter nothing").code, 2);
}
