#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

std::string fx(const std::string& name) { return (fs::path(LCUBE_FIXTURES) / name).string(); }

Result cube(const std::string& args) {
  std::string cmd = std::string("'") + CUBE_BIN + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json cube_json(const std::string& args, int expected_code) {
  Result r = cube("--format json " + args);
  EXPECT_EQ(r.code, expected_code) << args << "\n" << r.out;
  return json::parse(r.out);
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("cube_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, CheckAcceptsWellTypedProblem) {
  EXPECT_EQ(cube("check " + fx("thm1_source.problem")).code, 0);
  json j = cube_json("check " + fx("thm1_target.problem"), 0);
  EXPECT_EQ(j["command"], "check");
  EXPECT_EQ(j["outcome"], "yes");
  EXPECT_EQ(j["details"]["kind"], "matching");
  EXPECT_EQ(j["details"]["type"], "(P z)");
}

TEST(Cli, CalculusOverrideReportsMissingPair) {
  json j = cube_json("--calculus stlc check " + fx("thm1_target.problem"), 2);
  EXPECT_EQ(j["outcome"], "error");
  EXPECT_EQ(j["details"]["missing_pair"], "(Prop, Type)");
  EXPECT_EQ(j["details"]["line"], 6);
  EXPECT_EQ(cube("--calculus PP,PT check " + fx("thm1_target.problem")).code, 0);
  EXPECT_EQ(cube("--calculus nonsense check " + fx("thm1_target.problem")).code, 2);
}

TEST(Cli, SyntaxErrorsAndMissingFiles) {
  fs::path empty = scratch("empty.problem");
  std::ofstream(empty).close();
  json j = cube_json("check " + empty.string(), 2);
  EXPECT_EQ(j["details"]["line"], 1);
  EXPECT_EQ(j["details"]["column"], 1);
  EXPECT_EQ(cube("check /nonexistent/file.problem").code, 2);
  EXPECT_EQ(cube("frobnicate").code, 2);
  EXPECT_EQ(cube("check " + fx("mismatch.problem")).code, 2);
}

TEST(Cli, OrderOfFVariable) {
  Result r = cube("order " + fx("thm1_target.problem") + " f");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n");
  json j = cube_json("order " + fx("thm2_invalid.problem") + " f", 0);
  EXPECT_EQ(j["details"]["order"], "inf");
  EXPECT_EQ(cube("order " + fx("thm1_target.problem") + " nope").code, 2);
}

TEST(Cli, Classify) {
  json j = cube_json("classify " + fx("thm1_source.problem"), 0);
  EXPECT_EQ(j["details"]["kind"], "matching");
  EXPECT_EQ(j["details"]["term_elementary"], true);
  EXPECT_EQ(j["details"]["max_existential_order"], "2");
  json u = cube_json("classify " + fx("unify.problem"), 0);
  EXPECT_EQ(u["details"]["kind"], "unification");
}

TEST(Cli, VerifyOutcomes) {
  Result yes = cube("verify " + fx("thm1_target.problem") + " " + fx("thm1_sigma.subst"));
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out.rfind("yes", 0), 0u) << yes.out;
  json no = cube_json("verify " + fx("thm1_target.problem") + " " + fx("thm1_wrong.subst"), 1);
  EXPECT_EQ(no["outcome"], "no");
  EXPECT_EQ(no["details"]["well_typed"], false);
  EXPECT_EQ(cube("verify " + fx("erratum.problem") + " " + fx("erratum_sigma.subst")).code, 0);
}

TEST(Cli, NormalizeFileAndTerm) {
  Result r = cube("normalize " + fx("thm1_sigma_t1.problem"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(G c d)\n(G c d)\n");
  Result t = cube("normalize --term '([X:Prop]X Prop)'");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out, "Prop\n");
}

TEST(Cli, FuelExhaustionIsAnError) {
  EXPECT_EQ(cube("--fuel 1 normalize " + fx("thm1_sigma_t1.problem")).code, 2);
}

TEST(Cli, SolveThenVerify) {
  std::string prefix = scratch("sol").string();
  Result r = cube("solve " + fx("thm1_source.problem") + " --size 4 --solution-prefix " + prefix);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# 2 solution(s), exhaustive"), std::string::npos) << r.out;
  for (int i = 1; i <= 2; ++i) {
    std::string file = prefix + std::to_string(i) + ".subst";
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(cube("verify " + fx("thm1_source.problem") + " " + file).code, 0);
  }
  json none = cube_json("solve " + fx("mismatch.problem"), 2);
  EXPECT_EQ(none["outcome"], "error");
}

TEST(Cli, SolveWithoutSolutionsSaysNo) {
  fs::path p = scratch("clash.problem");
  std::ofstream(p) << "calculus stlc\nforall U : Prop\nforall a : U\nforall b : U\nmatch a = b\n";
  json j = cube_json("solve " + p.string() + " --size 3", 1);
  EXPECT_EQ(j["outcome"], "no");
  EXPECT_EQ(j["details"]["count"], 0);
  EXPECT_EQ(j["details"]["exhaustive"], true);
}

TEST(Cli, BuildThenCheck) {
  fs::path out = scratch("target.problem");
  EXPECT_EQ(cube("build thm1 " + fx("thm1_source.problem") + " -o " + out.string()).code, 0);
  EXPECT_EQ(cube("check " + out.string()).code, 0);
  Result order = cube("order " + out.string() + " f");
  EXPECT_EQ(order.out, "3\n");
  EXPECT_EQ(cube("verify " + out.string() + " " + fx("thm1_sigma.subst")).code, 0);

  json e = cube_json("build erratum " + fx("type_source.problem"), 0);
  EXPECT_EQ(e["details"]["f_order"], "4");
  EXPECT_EQ(e["details"]["invalid_per_erratum"], false);
  json t2 = cube_json("build thm2-invalid " + fx("type_source.problem"), 0);
  EXPECT_EQ(t2["details"]["f_order"], "inf");
  EXPECT_EQ(t2["details"]["invalid_per_erratum"], true);
}

TEST(Cli, BuildRespectsCalculus) {
  json j = cube_json("build thm1 " + fx("thm1_source_stlc.problem"), 2);
  EXPECT_EQ(j["details"]["missing_pairs"], json::array({"(Prop, Type)"}));
  EXPECT_EQ(cube("--calculus lPw-weak build erratum " + fx("type_source.problem")).code, 2);
}
