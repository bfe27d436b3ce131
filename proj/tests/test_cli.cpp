#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "schema_check.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Proc {
  int code;
  std::string out;
};

std::string corpus(const std::string& name) { return std::string(MILDKIT_PRESENTATIONS) + "/" + name; }

// Runs the installed binary through the shell; stderr is discarded so the
// captured stream is exactly what --json promises to keep clean.
Proc run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(MILDKIT_CLI_PATH) + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const schema::Checker& checker() {
  static const schema::Checker c(schema::load(MILDKIT_SCHEMA_PATH));
  return c;
}

json parse_valid(const std::string& out) {
  json doc = json::parse(out);
  auto errs = checker().errors(doc);
  EXPECT_TRUE(errs.empty()) << (errs.empty() ? "" : errs.front());
  return doc;
}

fs::path scratch(const std::string& contents) {
  static int counter = 0;
  auto p = fs::temp_directory_path() / ("mildkit_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter++) + ".pres");
  std::ofstream(p) << contents;
  return p;
}

}  // namespace

TEST(Cli, VersionAndHelpExitZero) {
  EXPECT_EQ(run("--version").code, 0);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ComputedVerdictExitsZero) {
  auto r = run("strongly-free '" + corpus("triangle3.pres") + "' --degree 6 --json");
  EXPECT_EQ(r.code, 0);
  auto doc = parse_valid(r.out);
  EXPECT_EQ(doc["result"]["verdict"], "refuted");
}

TEST(Cli, StrictNegativeExitsOne) {
  EXPECT_EQ(run("strongly-free '" + corpus("triangle3.pres") + "' --degree 6 --strict").code, 1);
  EXPECT_EQ(run("series-admissible --tau 1,1,1 --sigma 2,2,2 --strict").code, 1);
  EXPECT_EQ(run("demuskin '" + corpus("degenerate_p3.pres") + "' --strict").code, 1);
  EXPECT_EQ(run("anick '" + corpus("circuit4.pres") + "' --order 'deglex:x1<x3<x2<x4' --strict").code, 0);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("anick /nonexistent/file.pres").code, 2);
  EXPECT_EQ(run("anick '" + corpus("circuit4.pres") + "' --no-such-flag").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("").code, 2);
  auto bad = scratch("p: 3\ngenerators: x y\nrelators:\n  r: [x,q]\n");
  auto r = run("expand '" + bad.string() + "' --json");
  fs::remove(bad);
  EXPECT_EQ(r.code, 2);
  auto doc = parse_valid(r.out);
  EXPECT_EQ(doc["error"]["line"], 4);
  EXPECT_EQ(doc["error"]["column"], 9);
}

TEST(Cli, BudgetFromEnvironmentExitsThree) {
  auto r = run("hilbert '" + corpus("circuit4.pres") + "' --degree 8 --json", "MILDKIT_BUDGET=10");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(parse_valid(r.out)["error"]["kind"], "budget");
  EXPECT_EQ(run("hilbert '" + corpus("circuit4.pres") + "' --degree 8", "MILDKIT_BUDGET=banana").code, 2);
  EXPECT_EQ(run("hilbert '" + corpus("circuit4.pres") + "' --degree 8", "MILDKIT_BUDGET=100000000").code, 0);
}

TEST(Cli, PrecisionExitsThree) {
  EXPECT_EQ(run("massey '" + corpus("cyclic_p9.pres") + "' --cutoff 4").code, 3);
}

TEST(Cli, JsonOutputIsOneDocument) {
  for (const std::string cmd : {"zassenhaus", "mild", "massey", "one-relator"}) {
    auto r = run(cmd + " '" + corpus("demuskin_type_p3.pres") + "' --json");
    EXPECT_EQ(r.code, 0) << cmd;
    auto doc = parse_valid(r.out);
    EXPECT_EQ(doc["command"], cmd);
    EXPECT_EQ(doc["inputs"]["p"], 3);
  }
  auto h = run("hall --d 3 --n 3 --json");
  EXPECT_EQ(parse_valid(h.out)["result"]["size"], 8);
}

TEST(Cli, TextOutputNamesTheVerdict) {
  auto r = run("mild '" + corpus("demuskin_type_p3.pres") + "'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: mild"), std::string::npos);
  EXPECT_NE(r.out.find("decomposition: c = 2, e = 1"), std::string::npos);
}
