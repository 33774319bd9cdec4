#pragma once
// Line-oriented surface language for driving the kernel: generator
// declarations, let-bindings of builder calls, assertions, and print
// directives.  Scripts run against a fresh computad and produce a
// deterministic report suitable for golden-file tests.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "omega/weakcat.hpp"

namespace omega::script {

struct SourcePos {
  std::size_t line = 0;  // 1-based
  std::size_t col = 0;   // 1-based
};

// One parsed statement.  A single tagged struct keeps the parser and the
// runner in one obvious loop; unused fields stay empty.
struct Stmt {
  enum class Kind { Declare, Let, Assert, Print };
  enum class AssertKind { Wf, Parallel, Equal, Boundary };
  enum class PrintKind { Boundary, Term, Tree };

  Kind kind = Kind::Declare;
  SourcePos pos;

  // Declare: `0-cell NAME` / `1-cell NAME : SRC -> TGT` / `N-cell NAME : SRC => TGT`
  std::string name;  // also the bound name for Let
  std::size_t dim = 0;
  std::string src, tgt;

  // Let: `let NAME = BUILDER(arg, ...)`
  std::string builder;
  std::vector<std::string> args;

  // Assert / Print
  AssertKind assert_kind = AssertKind::Wf;
  PrintKind print_kind = PrintKind::Boundary;
};

bool stmt_equal(const Stmt& a, const Stmt& b);

struct Script {
  std::vector<Stmt> stmts;
};

bool script_equal(const Script& a, const Script& b);

// Parses the surface grammar.  Throws omega::ParseError with "line L, col C"
// in the message on syntax errors, duplicate names, unknown identifiers, or
// arity mismatches.  Name resolution is static: every identifier must be
// declared or bound on an earlier line.
Script parse_script(const std::string& text);

// Canonical text form; parse(pretty_print(s)) reproduces s statement for
// statement (comments and spacing are not preserved by parsing).
std::string pretty_print(const Script& s);

struct StmtOutcome {
  SourcePos pos;
  std::string text;    // canonical statement text
  bool ok = true;
  std::string detail;  // printed output, or the failure diagnostic
};

struct RunReport {
  std::vector<StmtOutcome> outcomes;
  std::size_t passed = 0;  // statements that executed and (for asserts) held
  std::size_t failed = 0;
  bool all_ok() const { return failed == 0; }
  std::string to_text() const;  // deterministic, no timestamps
};

// Executes statements in order against a fresh computad.  Builder
// precondition violations become statement failures, not exceptions.
RunReport run_script(const Script& s);
RunReport run_script_text(const std::string& text);

// Like run_script, but also yields the computad and the final name
// environment, so callers can export bound cells.
struct RunResult {
  RunReport report;
  std::shared_ptr<weakcat::Computad> computad;
  std::map<std::string, weakcat::CellPtr> env;
};
RunResult run_script_env(const Script& s);

// The builders the surface language exposes, in grammar order.
const std::vector<std::string>& builder_names();

// Instantiates `builder` over a canonical generic generator set and returns
// a transcript: one line per construction step with its boundary report,
// followed by the JSON encoding of the result.  Throws ParseError on an
// unknown builder name.
std::string derive_transcript(const std::string& builder);

}  // namespace omega::script
