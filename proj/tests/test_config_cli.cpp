// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rbm/cli.hpp"
#include "rbm/config.hpp"
#include "rbm/errors.hpp"

using namespace rbm;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string tmp_path(const std::string& name) { return std::string(RBM_TEST_TMPDIR) + "/" + name; }

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in("# run\ngamma = 0.2\n  sigma=1.5  # wide\n\ncheckpoints = 1, 10, 50\n");
  const auto c = RunConfig::parse(in);
  EXPECT_DOUBLE_EQ(c.get_double("gamma"), 0.2);
  EXPECT_DOUBLE_EQ(c.get_double("sigma"), 1.5);
  EXPECT_EQ(c.get_integers("checkpoints"), (std::vector<long long>{1, 10, 50}));
  EXPECT_FALSE(c.contains("beta"));
}

TEST(Config, Rejections) {
  std::istringstream unknown("gamma = 0.1\ncolour = red\n");
  EXPECT_THROW(RunConfig::parse(unknown), ArgumentError);
  std::istringstream empty_value("gamma =\n");
  EXPECT_THROW(RunConfig::parse(empty_value), ArgumentError);
  std::istringstream no_eq("gamma 0.1\n");
  EXPECT_THROW(RunConfig::parse(no_eq), ArgumentError);
  RunConfig c;
  c.set("gamma", "0.1x");
  EXPECT_THROW((void)c.get_double("gamma"), ArgumentError);
  c.set("seed", "-3");
  EXPECT_THROW((void)c.get_u64("seed"), ArgumentError);
  EXPECT_THROW((void)c.get_double("sigma"), ArgumentError);
  EXPECT_THROW(RunConfig::from_file("/nonexistent/run.cfg"), ArgumentError);
}

TEST(Config, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(Cli, SimulateSchemaAndHeader) {
  const auto r = run_cli({"two-masses", "simulate", "--steps", "5", "--seed", "9"});
  ASSERT_EQ(r.code, cli::ExitCode::ok) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0].rfind("# rbm ", 0), 0u);
  EXPECT_NE(l[0].find("command=two-masses simulate"), std::string::npos);
  EXPECT_NE(l[0].find("seed=9"), std::string::npos);
  EXPECT_EQ(l[1], "step,speed");
  EXPECT_EQ(l[2].rfind("0,", 0), 0u);
}

TEST(Cli, DeterministicPerSeed) {
  const std::vector<std::string> a{"spring", "simulate", "--steps", "50", "--seed", "4"};
  EXPECT_EQ(run_cli(a).out, run_cli(a).out);
  const auto b = run_cli({"spring", "simulate", "--steps", "50", "--seed", "5"});
  EXPECT_NE(run_cli(a).out, b.out);
}

TEST(Cli, ArgumentErrors) {
  EXPECT_EQ(run_cli({}).code, cli::ExitCode::argument_error);
  EXPECT_EQ(run_cli({"two-masses"}).code, cli::ExitCode::argument_error);
  EXPECT_EQ(run_cli({"two-masses", "simulate", "--bogus", "1"}).code, cli::ExitCode::argument_error);
  EXPECT_EQ(run_cli({"two-masses", "simulate", "--gamma", "0.9"}).code,
            cli::ExitCode::argument_error);
  EXPECT_EQ(run_cli({"two-masses", "simulate", "--out", "/nonexistent/x.csv"}).code,
            cli::ExitCode::argument_error);
  const auto r = run_cli({"cell", "simulate", "--cell", "hexagon"});
  EXPECT_EQ(r.code, cli::ExitCode::argument_error);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, NumericErrorExitCode) {
  const auto r = run_cli({"two-masses", "spectrum", "--grid-n", "20", "--v-max", "1e-300"});
  EXPECT_EQ(r.code, cli::ExitCode::numeric_error);
  EXPECT_NE(r.err.find("rbm: error:"), std::string::npos);
}

TEST(Cli, Schemas) {
  struct Case {
    std::vector<std::string> args;
    std::string header;
  };
  const std::vector<Case> cases{
      {{"two-masses", "kernel", "--grid-n", "5"}, "v,u,kernel"},
      {{"two-masses", "spectrum", "--grid-n", "40"}, "index,eigenvalue"},
      {{"two-masses", "gap-scan", "--gammas", "0.1,0.2", "--grid-n", "40"}, "gamma,gap,four_gamma_sq"},
      {{"two-masses", "evolve", "--grid-n", "40", "--checkpoints", "1,2"}, "step,v,density,tv"},
      {{"two-masses", "moments", "--steps", "10000"}, "z,e1,se1,e2,se2,e3,se3"},
      {{"spring", "simulate", "--steps", "3"}, "step,speed"},
      {{"cell", "simulate", "--steps", "3", "--cell", "notch"}, "step,theta"},
      {{"cell", "spectrum", "--grid-n", "10", "--samples-per-node", "1000"}, "index,eigenvalue"},
      {{"gibbs", "sample-wall", "--steps", "3", "--dim", "2", "--system", "free"},
       "index,energy,q1,q2,v1,v2"},
      {{"gibbs", "sample-stationary", "--steps", "3"}, "index,energy,q1,v1"},
  };
  for (const auto& c : cases) {
    const auto r = run_cli(c.args);
    ASSERT_EQ(r.code, cli::ExitCode::ok) << c.args[0] << ' ' << c.args[1] << ": " << r.err;
    const auto l = lines(r.out);
    ASSERT_GE(l.size(), 3u);
    EXPECT_EQ(l[1], c.header) << c.args[0] << ' ' << c.args[1];
  }
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string cfg = tmp_path("cli_test.cfg");
  {
    std::ofstream f(cfg);
    f << "gamma = 0.2\nsteps = 4\nseed = 11\n";
  }
  const auto from_file = run_cli({"two-masses", "simulate", "--config", cfg});
  ASSERT_EQ(from_file.code, cli::ExitCode::ok) << from_file.err;
  const auto header = lines(from_file.out)[0];
  EXPECT_NE(header.find("gamma=0.2"), std::string::npos);
  EXPECT_NE(header.find("seed=11"), std::string::npos);
  EXPECT_EQ(lines(from_file.out).size(), 7u);

  const auto overridden = run_cli({"two-masses", "simulate", "--config", cfg, "--gamma", "0.3"});
  ASSERT_EQ(overridden.code, cli::ExitCode::ok);
  EXPECT_NE(lines(overridden.out)[0].find("gamma=0.3"), std::string::npos);

  {
    std::ofstream f(cfg);
    f << "gamma = 0.2\nwarp = 9\n";
  }
  EXPECT_EQ(run_cli({"two-masses", "simulate", "--config", cfg}).code,
            cli::ExitCode::argument_error);
}

TEST(Cli, WritesOutFile) {
  const std::string path = tmp_path("cli_out.csv");
  const auto r = run_cli({"two-masses", "simulate", "--steps", "3", "--seed", "2", "--out", path});
  ASSERT_EQ(r.code, cli::ExitCode::ok);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_EQ(buf.str(), run_cli({"two-masses", "simulate", "--steps", "3", "--seed", "2"}).out);
}
