// End-to-end tests for the omega-kernel executable. These spawn the real
// binary via the shell, so they assume a POSIX system.
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunOut {
  int code;
  std::string out;
};

RunOut run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string outfile = "cli_out.txt";
  std::string cmd = env_prefix + std::string(OMEGA_KERNEL_BIN) + " " + args + " > " + outfile +
                    " 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  std::ifstream in(outfile);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string script_path(const std::string& name) {
  return std::string(OMEGA_SCRIPTS_DIR) + "/" + name;
}

void write_file(const std::string& name, const std::string& text) {
  std::ofstream out(name);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("check: shipped scripts pass") {
  auto p = run_cli("check " + script_path("pentagon.ok"));
  CHECK(p.code == 0);
  CHECK(p.out.find("summary: passed 23, failed 0, total 23") != std::string::npos);

  auto e = run_cli("check " + script_path("eckmann_hilton.ok"));
  CHECK(e.code == 0);
  CHECK(e.out.find("summary: passed 16, failed 0, total 16") != std::string::npos);
}

TEST_CASE("check: exit codes distinguish failure kinds") {
  CHECK(run_cli("check does_not_exist.ok").code == 2);

  write_file("tmp_parse_error.ok", "0-cell a\nlet q = frob(a)\n");
  auto bad = run_cli("check tmp_parse_error.ok");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("unknown builder 'frob'") != std::string::npos);

  write_file("tmp_fail_assert.ok",
             "0-cell a\n0-cell b\n1-cell f : a -> b\n1-cell g : a -> b\n"
             "assert equal(f, g)\n");
  auto failing = run_cli("check tmp_fail_assert.ok");
  CHECK(failing.code == 1);
  CHECK(failing.out.find("FAIL") != std::string::npos);
  CHECK(failing.out.find("cells differ") != std::string::npos);
}

TEST_CASE("derive: transcripts over generic generators") {
  auto a = run_cli("derive assoc");
  CHECK(a.code == 0);
  CHECK(a.out.find("let result = assoc(f, g, h)") != std::string::npos);
  CHECK(a.out.find("dim 2 over pd2:[[],[],[]]") != std::string::npos);
  CHECK(a.out.find("json: {") != std::string::npos);

  auto b = run_cli("derive braid");
  CHECK(b.code == 0);
  CHECK(b.out.find("dim 3 over pd3:[[[o,o]]]") != std::string::npos);

  auto u = run_cli("derive nope");
  CHECK(u.code == 2);
  CHECK(u.out.find("unknown builder 'nope'") != std::string::npos);
  CHECK(u.out.find("builders:") != std::string::npos);
}

TEST_CASE("enumerate-pd: frozen small tables") {
  auto one = run_cli("enumerate-pd --dim 1 --max-positions 3");
  CHECK(one.code == 0);
  CHECK(one.out == "pd1:[]\npd1:[o]\npd1:[o,o]\npd1:[o,o,o]\n");

  auto two = run_cli("enumerate-pd --dim 2 --max-positions 2");
  CHECK(two.code == 0);
  CHECK(two.out == "pd2:[]\npd2:[[]]\npd2:[[],[]]\npd2:[[o]]\n");
}

TEST_CASE("export: prints one bound cell as JSON") {
  auto ok = run_cli("export " + script_path("pentagon.ok") + " al");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"tree\":\"pd2:[[],[],[]]\"") != std::string::npos);
  CHECK(ok.out.find("\"term\":") != std::string::npos);

  auto unknown = run_cli("export " + script_path("pentagon.ok") + " zz");
  CHECK(unknown.code == 2);
  CHECK(unknown.out.find("binds no cell named 'zz'") != std::string::npos);
}

TEST_CASE("selftest: aggregated suites pass and are seed-deterministic") {
  auto s = run_cli("selftest --budget 40");
  CHECK(s.code == 0);
  CHECK(s.out.find("selftest: PASS (budget=40, seed=20260814)") != std::string::npos);
  CHECK(s.out.find("strict-axioms:") != std::string::npos);
  CHECK(s.out.find("failures=0") != std::string::npos);

  auto r1 = run_cli("selftest --budget 40", "OMEGA_SEED=77 ");
  auto r2 = run_cli("selftest --budget 40", "OMEGA_SEED=77 ");
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("seed=77") != std::string::npos);
}

TEST_CASE("top-level parsing") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("enumerate-pd --dim 0 --max-positions 2").code == 2);
}
