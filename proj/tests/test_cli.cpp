#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace {

struct Result {
  std::string out;
  int code = -1;
};

/// Runs the CLI with `args` (shell-quoted by the caller); stderr is discarded.
Result cli(const std::string& args) {
  const std::string cmd = std::string(MBLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("mblab_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

const std::string kSimulate =
    "simulate --family const:k=3 --model bandit --learner halving --adversary always-no";

}  // namespace

TEST(Cli, SimulatePrintsTheTranscript) {
  const auto r = cli(kSimulate);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["family"], "const:k=3");
  EXPECT_EQ(j["mistake_count"], 2);
  EXPECT_EQ(j["rounds"].size(), 2u);
  EXPECT_EQ(j["rounds"][0]["feedback"], "NO");
  EXPECT_EQ(j["terminal_reason"], "learner_converged");
}

TEST(Cli, SimulateIsByteIdenticalAcrossRuns) {
  const std::string args =
      "simulate --family 'linear:q=8,n=2' --model bandit --learner wmv:bandit2 --adversary random "
      "--seed 17";
  const auto a = cli(args);
  const auto b = cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli(args + "0").out);
}

TEST(Cli, RoundCapEndsTheGame) {
  const auto r = cli(
      "simulate --family 'linear:q=4,n=2' --model bandit --learner wmv:bandit2 --adversary "
      "random:rounds=500 --round-cap 3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rounds"].size(), 3u);
  EXPECT_EQ(j["terminal_reason"], "round_cap");
}

TEST(Cli, SolvePrintsValueAndWork) {
  const auto r = cli("solve --family 'linear:q=2,n=2' --model std");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], 2);
  EXPECT_GT(j["states_explored"].get<int>(), 0);
  EXPECT_TRUE(j.contains("elapsed_ms"));
  EXPECT_EQ(nlohmann::json::parse(cli("solve --family const:k=4 --model bandit").out)["value"], 3);
}

TEST(Cli, SolveOverBudgetExitsWithCapacity) {
  EXPECT_EQ(cli("solve --family 'linear:q=4,n=2' --model bandit --budget 5").code, 4);
  EXPECT_EQ(cli("solve --family 'compose-lb:k=8,M=1' --model std").code, 4);
}

TEST(Cli, ParseErrorsExitWithUsage) {
  EXPECT_EQ(cli("solve --family 'bogus:k=2' --model std").code, 1);
  EXPECT_EQ(cli("solve --family const:k=2 --model sideways").code, 1);
  EXPECT_EQ(cli("simulate --family const:k=2 --model std --learner halving --adversary nemesis").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("solve --family 'compose-lb:k=3,M=1' --model std").code, 1);
}

TEST(Cli, SweepWithAnEmptyGridPrintsOnlyTheHeader) {
  const auto r = cli("sweep");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].substr(0, 20), "cell,family,model,le");
}

TEST(Cli, SweepSkipsConfigurationsOutsideTheirConstraints) {
  const auto r = cli(
      "sweep --family 'linear:q=4,n=1' --model amb:r=3 --learner wmv:amb:r=3 --adversary greedy");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[1].find("skipped: constraint"), std::string::npos);
}

TEST(Cli, SweepChecksBothBounds) {
  const auto r = cli(
      "sweep --family 'linear:q=8,n=2' --model bandit --learner wmv:bandit2 --learner halving "
      "--adversary lin-bandit --adversary greedy --seed 0..2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1u + 2 * 2 * 3);
  std::size_t upper_checked = 0, lower_checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].find(",fail"), std::string::npos) << rows[i];
    EXPECT_NE(rows[i].find(",ok,"), std::string::npos) << rows[i];
    upper_checked += rows[i].find("bandit2_upper,33/1,33.000000,pass") != std::string::npos;
    lower_checked += rows[i].find("lin_bandit_lower,4/1,4.000000,pass") != std::string::npos;
  }
  EXPECT_EQ(upper_checked, 6u);
  EXPECT_EQ(lower_checked, 6u);
}

TEST(Cli, SweepWritesToAFile) {
  const auto path = std::filesystem::temp_directory_path() / "mblab_cli_sweep.csv";
  std::filesystem::remove(path);
  const auto r = cli("sweep --family const:k=3 --model bandit --learner halving --adversary greedy --out " +
                     path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(lines(ss.str()).size(), 2u);
}

TEST(Cli, VerifyExitCodes) {
  const auto sim = cli(kSimulate);
  ASSERT_EQ(sim.code, 0);
  EXPECT_EQ(cli("verify " + temp_file("good.json", sim.out).string()).code, 0);

  auto j = nlohmann::json::parse(sim.out);
  j["mistake_count"] = 5;
  const auto bad = cli("verify " + temp_file("bad.json", j.dump()).string());
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(nlohmann::json::parse(bad.out)["passed"].get<bool>());

  EXPECT_EQ(cli("verify " + temp_file("junk.json", "{not json").string()).code, 1);
  EXPECT_EQ(cli("verify " + temp_file("nofamily.json", "{}").string()).code, 1);
  EXPECT_EQ(cli("verify /nonexistent/transcript.json").code, 1);
}
