#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ttk/cli.hpp"

using namespace ttk;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 2;
  Report report;
  std::string err;
  std::string json;
};

Run run(std::vector<std::string> args) {
  Run r;
  std::reverse(args.begin(), args.end());
  r.code = run_command(args, r.report, r.err);
  r.json = emit_report(r.report, "json");
  return r;
}

std::string stdlib_path(const std::string& name) {
  return std::string(TTK_STDLIB_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("check: golden files exit 0") {
  for (const auto& entry : fs::directory_iterator(TTK_STDLIB_DIR)) {
    if (entry.path().extension() != ".th") continue;
    Run r = run({"check", entry.path().string()});
    INFO(entry.path().string() << ": " << r.err);
    CHECK(r.code == 0);
    CHECK(r.report.verdict == "ok");
  }
}

TEST_CASE("check: malformed corpus exits 2 with positioned errors") {
  size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(TTK_MALFORMED_DIR)) {
    if (entry.path().extension() != ".th") continue;
    ++seen;
    Run r = run({"check", entry.path().string()});
    INFO(entry.path().string());
    CHECK(r.code == 2);
    CHECK(r.report.verdict == "error");
    CHECK_FALSE(r.err.empty());
    // Positioned: the report carries the offending line.
    CHECK(r.report.details.contains("line"));
  }
  CHECK(seen == 10);
}

TEST_CASE("json reports are byte-stable across runs") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"check", stdlib_path("t_pi1.th")},
        {"prove", stdlib_path("id_full.th"), "--goal", "Id_def", "--depth", "3",
         "--fuel", "15"},
        {"normalize", stdlib_path("t_pi1.th"), "--telescope", "tele2", "--term",
         "app(v1,wk_ty0(v1,v1),lam(v1,wk_ty0(v1,v1),var0(v1)),v2)", "--fuel", "10"},
        {"separated", stdlib_path("t_pi1.th"), "--bound", "2"}}) {
    Run a = run(args);
    Run b = run(args);
    INFO(args[0]);
    CHECK(a.json == b.json);
    CHECK(a.code == b.code);
  }
}

TEST_CASE("prove subcommand: axioms and goals") {
  Run ok = run({"prove", stdlib_path("id_full.th"), "--goal", "Id_def", "--depth", "3",
                "--fuel", "15"});
  CHECK(ok.code == 0);
  CHECK(ok.report.verdict == "ok");

  Run missing =
      run({"prove", stdlib_path("id_full.th"), "--goal", "nope", "--depth", "2"});
  CHECK(missing.code == 2);

  // The alias flag spelling works too.
  Run alias = run({"prove", stdlib_path("id_full.th"), "--axiom-or-goal", "Id_def",
                   "--depth", "3", "--fuel", "15"});
  CHECK(alias.code == 0);
}

TEST_CASE("normalize subcommand reduces the beta instance") {
  Run r = run({"normalize", stdlib_path("t_pi1.th"), "--telescope", "tele2", "--term",
               "app(v1,wk_ty0(v1,v1),lam(v1,wk_ty0(v1,v1),var0(v1)),v2)", "--fuel",
               "10"});
  REQUIRE(r.code == 0);
  CHECK(r.report.details["normal_form"] == "v2");
  CHECK(r.report.details["steps"] == 2);
  CHECK(r.report.details["replay_ok"] == true);
}

TEST_CASE("confluence subcommand certifies t_pi1 at a small bound") {
  Run r = run({"confluence", stdlib_path("t_pi1.th"), "--telescope", "tele2", "--depth",
               "2", "--fuel", "40"});
  INFO(r.json);
  CHECK(r.code == 0);
  CHECK(r.report.details["verdict"] == "certified-at-bound");
}

TEST_CASE("separated subcommand") {
  Run r = run({"separated", stdlib_path("t_pi1.th"), "--bound", "2"});
  CHECK(r.code == 0);
  CHECK(r.report.details["a_e"].size() >= 1);

  Run bad = run({"separated", stdlib_path("id0.th"), "--bound", "2"});
  CHECK(bad.code == 1);  // refuted: Id has no definedness axiom
}

TEST_CASE("morita subcommand modes") {
  Run inst = run({"morita", stdlib_path("contr_to_unit.th"), "--morphism",
                  "contr_to_unit", "--mode", "instance", "--depth", "4"});
  INFO(inst.json);
  CHECK(inst.code == 0);
  CHECK(inst.report.verdict == "ok");

  Run cond1 = run({"morita", stdlib_path("contr_to_unit.th"), "--morphism",
                   "contr_to_unit", "--mode", "cond1", "--depth", "4"});
  CHECK(cond1.code == 0);

  Run ext = run({"morita", stdlib_path("pi.th"), "--morphism", "pi_incl", "--mode",
                 "ext", "--depth", "4", "--sub-depth", "1"});
  INFO(ext.json);
  CHECK(ext.code == 0);
  CHECK(ext.report.verdict == "ok");

  Run tl = run({"morita", stdlib_path("pi.th"), "--morphism", "pi_incl", "--mode",
                "type-lift", "--depth", "3"});
  INFO(tl.json);
  CHECK(tl.code == 0);
}

TEST_CASE("colimit subcommand prints a parsable theory") {
  Run r = run({"colimit", stdlib_path("id_full.th"), stdlib_path("contractible.th")});
  REQUIRE(r.code == 0);
  std::string text = r.report.details["theory"];
  CHECK(text.find("theory colim") != std::string::npos);
}

TEST_CASE("confluence counterexamples exit 1") {
  std::string path = std::string(TTK_CLI_PATH) + ".abc.th";
  {
    std::ofstream out(path);
    out << "theory abc {\n"
           "  fun a : tm 0 ;\n  fun b : tm 0 ;\n  fun c : tm 0 ;\n"
           "  axiom a_def [] : true |- a def ;\n"
           "  axiom b_def [] : true |- b def ;\n"
           "  axiom c_def [] : true |- c def ;\n"
           "  axiom ab [] : a def |- a = b ;\n"
           "  axiom ac [] : a def |- a = c ;\n"
           "}\n";
  }
  Run r = run({"confluence", path, "--depth", "2", "--fuel", "15"});
  CHECK(r.code == 1);
  CHECK(r.report.verdict == "refuted");
  std::remove(path.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"verify-everything"}).code == 2);
  CHECK(run({"prove", stdlib_path("id_full.th")}).code == 2);  // missing --goal
  CHECK(run({"check", "/nonexistent/file.th"}).code == 2);
}

TEST_CASE("the installed binary honors the exit-code contract") {
  std::string cli = TTK_CLI_PATH;
  auto shell = [&](const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
  };
  int ok = shell(cli + " check " + stdlib_path("id0.th"));
  CHECK(WEXITSTATUS(ok) == 0);
  int bad = shell(cli + " check " + std::string(TTK_MALFORMED_DIR) + "/m01_missing_result.th");
  CHECK(WEXITSTATUS(bad) == 2);
  int usage = shell(cli + " frobnicate");
  CHECK(WEXITSTATUS(usage) == 2);
}

TEST_CASE("TTK_DEFAULT_FUEL env var sets the default fuel") {
  setenv("TTK_DEFAULT_FUEL", "7", 1);
  Run r = run({"normalize", stdlib_path("t_pi1.th"), "--telescope", "tele1", "--term",
               "ft0(v1)"});
  unsetenv("TTK_DEFAULT_FUEL");
  REQUIRE(r.code == 0);
  CHECK(r.report.bounds["fuel"] == 7);
}
