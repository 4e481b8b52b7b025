#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "json.hpp"
#include "parlap/io.hpp"

namespace parlap {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("parlap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  /// Exit code of the CLI; stderr goes to err.txt.
  int run(const std::string& args) const {
    const std::string cmd = std::string(PARLAP_CLI) + " " + args + " 2> " + path("err.txt") + " > " + path("out.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(Cli, SolveUnitEdge) {
  write("edge.el", "0 1 1\n");
  write("b.txt", "1\n-1\n");
  ASSERT_EQ(run("--mode solve --graph " + path("edge.el") + " --rhs " + path("b.txt") + " --epsilon 1e-6 --output " +
                path("x.txt")),
            0)
      << read("err.txt");
  std::ifstream x(path("x.txt"));
  const Vector v = io::read_vector(x);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 0.5, 1e-6);
  EXPECT_NEAR(v[1], -0.5, 1e-6);
}

TEST_F(Cli, SchurTriangle) {
  write("tri.el", "0 1 1\n1 2 1\n0 2 1\n");
  write("c.txt", "1\n2\n");
  ASSERT_EQ(run("--mode schur --graph " + path("tri.el") + " --terminals " + path("c.txt") + " --epsilon 0.3 --output " +
                path("s.el") + " --report " + path("r.json")),
            0)
      << read("err.txt");
  std::ifstream in(path("s.el"));
  const auto g = io::read_edge_list(in);
  double total = 0.0;
  for (const Edge& e : g.edges()) total += e.w;
  // Two vertices: the spectral error is the log ratio of the single weight.
  EXPECT_LE(std::abs(std::log(total / 1.5)), 0.3);
  const auto report = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(report["mode"], "schur");
}

TEST_F(Cli, MissingRhs) {
  write("edge.el", "0 1 1\n");
  EXPECT_EQ(run("--mode solve --graph " + path("edge.el")), 1);
  EXPECT_NE(read("err.txt").find("--rhs"), std::string::npos);
}

TEST_F(Cli, ParseAndValidationErrorsExitOne) {
  write("bad.el", "0 0 1\n");
  write("b.txt", "1\n-1\n");
  EXPECT_EQ(run("--mode solve --graph " + path("bad.el") + " --rhs " + path("b.txt")), 1);
  EXPECT_EQ(run("--mode nonsense"), 1);
  write("edge.el", "0 1 1\n");
  EXPECT_EQ(run("--mode solve --graph " + path("edge.el") + " --rhs " + path("b.txt") + " --epsilon 0.7"), 1);
  write("b3.txt", "1\n-1\n0\n");
  EXPECT_EQ(run("--mode solve --graph " + path("edge.el") + " --rhs " + path("b3.txt")), 1);
}

TEST_F(Cli, DeterministicAcrossThreadCounts) {
  const std::string common = "--mode solve --demo regular --demo-size 600 --seed 5 --deterministic";
  ASSERT_EQ(run(common + " --threads 1 --output " + path("x1.txt") + " --report " + path("r1.json")), 0)
      << read("err.txt");
  ASSERT_EQ(run(common + " --threads 3 --output " + path("x3.txt") + " --report " + path("r3.json")), 0)
      << read("err.txt");
  ASSERT_EQ(run(common + " --threads 1 --output " + path("y1.txt") + " --report " + path("s1.json")), 0)
      << read("err.txt");
  EXPECT_EQ(read("x1.txt"), read("x3.txt"));
  EXPECT_EQ(read("x1.txt"), read("y1.txt"));
  EXPECT_EQ(read("r1.json"), read("s1.json"));
  const auto report = nlohmann::json::parse(read("r1.json"));
  EXPECT_EQ(report["iterations"], 103);
}

TEST_F(Cli, FactorMode) {
  ASSERT_EQ(run("--mode factor --demo grid --demo-size 400 --output " + path("f.txt")), 0) << read("err.txt");
  const std::string text = read("f.txt");
  EXPECT_NE(text.find("# base"), std::string::npos);
}

TEST_F(Cli, MatrixMarketInput) {
  write("tri.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 6\n1 1 2\n2 2 2\n3 3 2\n2 1 -1\n3 1 -1\n3 2 -1\n");
  write("b.txt", "2\n-1\n-1\n");
  ASSERT_EQ(run("--mode solve --format matrixmarket --graph " + path("tri.mtx") + " --rhs " + path("b.txt") +
                " --output " + path("x.txt")),
            0)
      << read("err.txt");
  std::ifstream x(path("x.txt"));
  const Vector v = io::read_vector(x);
  EXPECT_NEAR(v[0], 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(v[1], -1.0 / 3.0, 1e-6);
}

}  // namespace
}  // namespace parlap
