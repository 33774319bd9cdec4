#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "omega/script.hpp"

using namespace omega;
using namespace omega::script;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error_of(const std::string& text) {
  try {
    parse_script(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "(no error)";
}

}  // namespace

TEST_CASE("statement forms parse and pretty-print canonically") {
  const std::string text =
      "# a comment\n"
      "0-cell a\n"
      "0-cell b\n"
      "1-cell f : a -> b\n"
      "2-cell F : f => f\n"
      "let g  =  comp0( f ,f )\n"
      "assert wf(g)\n"
      "assert parallel(f, f)\n"
      "assert equal(f, f)\n"
      "assert boundary(F) = (f, f)\n"
      "print boundary(g)\n"
      "print term(g)\n"
      "print tree(g)\n";
  auto s = parse_script(text);
  REQUIRE(s.stmts.size() == 12);  // the comment is dropped
  CHECK(s.stmts[0].kind == Stmt::Kind::Declare);
  CHECK(s.stmts[0].dim == 0);
  CHECK(s.stmts[3].kind == Stmt::Kind::Declare);
  CHECK(s.stmts[3].dim == 2);
  CHECK(s.stmts[4].kind == Stmt::Kind::Let);
  CHECK(s.stmts[4].builder == "comp0");
  CHECK(s.stmts[5].assert_kind == Stmt::AssertKind::Wf);
  CHECK(s.stmts[8].assert_kind == Stmt::AssertKind::Boundary);
  CHECK(s.stmts[9].print_kind == Stmt::PrintKind::Boundary);

  // whitespace is normalized away by the canonical form
  auto printed = pretty_print(s);
  CHECK(printed.find("let g = comp0(f, f)") != std::string::npos);
  CHECK(script_equal(parse_script(printed), s));
}

TEST_CASE("shipped scripts are parse/pretty fixed points") {
  for (const char* name : {"pentagon.ok", "eckmann_hilton.ok"}) {
    auto text = slurp(std::string(OMEGA_SCRIPTS_DIR) + "/" + name);
    auto s = parse_script(text);
    CHECK(s.stmts.size() > 10);
    auto printed = pretty_print(s);
    CHECK(script_equal(parse_script(printed), s));
    CHECK(pretty_print(parse_script(printed)) == printed);
  }
}

TEST_CASE("parse errors carry exact positions") {
  CHECK(parse_error_of("0-cell a\nlet q = comp0(a, g)\n") ==
        "script: line 2, col 18: unknown identifier 'g'");
  CHECK(parse_error_of("0-cell a\nlet q = frob(a)\n") ==
        "script: line 2, col 9: unknown builder 'frob'");
  CHECK(parse_error_of("0-cell a\n0-cell b\n0-cell a\n") ==
        "script: line 3, col 8: duplicate name 'a'");
  CHECK(parse_error_of("0-cell a\n0-cell b\n2-cell f : a -> b\n") ==
        "script: line 3, col 14: declarations above dimension 1 use '=>'");
  CHECK(parse_error_of("0-cell a\n0-cell b\n1-cell f : a => b\n") ==
        "script: line 3, col 14: dimension 1 declarations use '->'");
  CHECK(parse_error_of("0-cell a\nlet q = id(a, a)\n") ==
        "script: line 2, col 9: builder 'id' takes 1 arguments, got 2");
  CHECK(parse_error_of("0-cell a : a -> a\n") ==
        "script: line 1, col 10: unexpected trailing input");
  CHECK(parse_error_of("wibble wobble\n") ==
        "script: line 1, col 1: expected a declaration, let, assert, or print");
  CHECK(parse_error_of("let = comp0(a, b)\n") ==
        "script: line 1, col 5: expected an identifier");
}

TEST_CASE("running the shipped scripts succeeds and matches the goldens") {
  struct Case {
    const char* script;
    const char* golden;
  } cases[] = {
      {"pentagon.ok", "pentagon.report.txt"},
      {"eckmann_hilton.ok", "eckmann_hilton.report.txt"},
  };
  for (const auto& c : cases) {
    auto text = slurp(std::string(OMEGA_SCRIPTS_DIR) + "/" + c.script);
    auto rep = run_script_text(text);
    CHECK(rep.all_ok());
    CHECK(rep.failed == 0);
    CHECK(rep.to_text() == slurp(std::string(OMEGA_GOLDEN_DIR) + "/" + c.golden));
  }
}

TEST_CASE("failed assertions are reported and do not bind names") {
  const std::string text =
      "0-cell a\n"
      "0-cell b\n"
      "1-cell f : a -> b\n"
      "1-cell g : a -> b\n"
      "assert equal(f, g)\n"
      "assert parallel(f, g)\n";
  auto rep = run_script_text(text);
  CHECK(!rep.all_ok());
  CHECK(rep.failed == 1);
  CHECK(rep.passed == 5);
  CHECK(rep.to_text().find("FAIL") != std::string::npos);
  CHECK(rep.to_text().find("cells differ") != std::string::npos);

  // a failing let leaves its name unbound and cascades deterministically
  const std::string text2 =
      "0-cell a\n"
      "0-cell b\n"
      "0-cell c\n"
      "1-cell f : a -> b\n"
      "1-cell h : b -> c\n"
      "1-cell k : a -> c\n"
      "let bad = coh(f, k)\n"  // not parallel: no coherence cell
      "let worse = comp0(bad, h)\n"
      "assert wf(worse)\n";
  auto rep2 = run_script_text(text2);
  CHECK(!rep2.all_ok());
  CHECK(rep2.failed == 3);
  CHECK(rep2.to_text().find("operand 'bad' is unbound (its defining statement failed)") !=
        std::string::npos);
}

TEST_CASE("assert boundary compares both faces") {
  const std::string text =
      "0-cell a\n"
      "0-cell b\n"
      "1-cell f : a -> b\n"
      "1-cell g : a -> b\n"
      "2-cell F : f => g\n"
      "assert boundary(F) = (g, f)\n";
  auto rep = run_script_text(text);
  CHECK(rep.failed == 1);
  CHECK(rep.to_text().find("source mismatch") != std::string::npos);
}

TEST_CASE("run_script_env exposes the bindings") {
  auto res = run_script_env(parse_script("0-cell a\nlet i = id(a)\n"));
  CHECK(res.report.all_ok());
  REQUIRE(res.computad);
  REQUIRE(res.env.count("i") == 1);
  CHECK(res.env.at("i")->dim() == 1);
  CHECK(weakcat::cells_equal(res.env.at("i"), weakcat::weak_id(*res.computad, res.env.at("a"))));
}

TEST_CASE("derivation transcripts") {
  CHECK(builder_names().size() == 16);
  auto t = derive_transcript("braid");
  CHECK(t.find("let result = braid(a, b)") != std::string::npos);
  CHECK(t.find("dim 3 over pd3:[[[o,o]]]") != std::string::npos);
  CHECK(t.find("summary: passed 9, failed 0, total 9") != std::string::npos);
  CHECK(t.find("json: {") != std::string::npos);

  auto t2 = derive_transcript("pentagon");
  CHECK(t2.find("let result = pentagon(f, g, h, i)") != std::string::npos);
  CHECK(t2.find("dim 3 over pd3:[[],[],[],[]]") != std::string::npos);

  CHECK_THROWS_WITH_AS(derive_transcript("nope"), "derive: unknown builder 'nope'", ParseError);
}
