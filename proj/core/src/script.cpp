#include "omega/script.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <utility>

#include "omega/foundations.hpp"
#include "omega/operad.hpp"
#include "omega/pasting.hpp"

namespace omega::script {

using weakcat::CellPtr;
using weakcat::Computad;

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

const std::vector<std::string>& builder_names() {
  static const std::vector<std::string> names = {
      "comp0",    "comp1",    "comp2",      "comp3", "id",       "assoc",
      "unitorL",  "unitorR",  "exch",       "pentagon", "triangle",
      "naturality", "braid",  "braidInv",   "inv",   "coh"};
  return names;
}

namespace {

std::size_t builder_arity(const std::string& b) {
  if (b == "comp0" || b == "comp1" || b == "comp2" || b == "comp3") return 2;
  if (b == "id" || b == "unitorL" || b == "unitorR" || b == "inv") return 1;
  if (b == "assoc" || b == "naturality") return 3;
  if (b == "exch" || b == "pentagon") return 4;
  if (b == "triangle" || b == "braid" || b == "braidInv" || b == "coh") return 2;
  return 0;  // unreachable for known builders
}

bool known_builder(const std::string& b) {
  for (const auto& n : builder_names())
    if (n == b) return true;
  return false;
}

CellPtr run_builder(const Computad& C, const std::string& b, const std::vector<CellPtr>& a) {
  using namespace omega::weakcat;
  if (b == "comp0") return weak_comp(C, 0, a[0], a[1]);
  if (b == "comp1") return weak_comp(C, 1, a[0], a[1]);
  if (b == "comp2") return weak_comp(C, 2, a[0], a[1]);
  if (b == "comp3") return weak_comp(C, 3, a[0], a[1]);
  if (b == "id") return weak_id(C, a[0]);
  if (b == "assoc") return associator(C, a[0], a[1], a[2]);
  if (b == "unitorL") return unitor_left(C, a[0]);
  if (b == "unitorR") return unitor_right(C, a[0]);
  if (b == "exch") return exchanger(C, a[0], a[1], a[2], a[3]);
  if (b == "pentagon") return pentagon_witness(C, a[0], a[1], a[2], a[3]).witness;
  if (b == "triangle") return triangle_witness(C, a[0], a[1]).witness;
  if (b == "naturality") return naturality_witness(C, a[0], a[1], a[2]).witness;
  if (b == "braid") return eh_braid(C, a[0], a[1]);
  if (b == "braidInv") return eh_braid_inverse(C, a[0], a[1]);
  if (b == "inv") return inverse_of(C, a[0]);
  if (b == "coh") return coherence_cell(C, a[0], a[1]);
  throw PreconditionError("unknown builder: " + b);
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

struct LineParser {
  const std::string& s;
  std::size_t lineno;
  std::size_t i = 0;

  [[noreturn]] void err(std::size_t col, const std::string& msg) const {
    throw ParseError("script: line " + std::to_string(lineno) + ", col " +
                     std::to_string(col) + ": " + msg);
  }
  [[noreturn]] void err_here(const std::string& msg) const { err(i + 1, msg); }

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }
  bool peek_lit(const std::string& lit) {
    skip_ws();
    return s.compare(i, lit.size(), lit) == 0;
  }
  void expect_lit(const std::string& lit) {
    skip_ws();
    if (!peek_lit(lit)) err_here("expected '" + lit + "'");
    i += lit.size();
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  std::string ident(std::size_t* col_out = nullptr) {
    skip_ws();
    if (i >= s.size() || !ident_start(s[i])) err_here("expected an identifier");
    std::size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    if (col_out) *col_out = start + 1;
    return s.substr(start, i - start);
  }
  std::size_t number() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) err_here("expected a number");
    std::size_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + static_cast<std::size_t>(s[i++] - '0');
    return v;
  }
  void expect_end() {
    if (!at_end()) err_here("unexpected trailing input");
  }
};

// Strips a trailing `#` comment, respecting nothing fancier (the grammar has
// no string literals).
std::string strip_comment(const std::string& line) {
  auto h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

bool blank(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

Script parse_script(const std::string& text) {
  Script out;
  std::set<std::string> names;

  auto use_name = [&](LineParser& p, const std::string& n, std::size_t col) {
    if (!names.count(n)) p.err(col, "unknown identifier '" + n + "'");
  };
  auto bind_name = [&](LineParser& p, const std::string& n, std::size_t col) {
    if (!names.insert(n).second) p.err(col, "duplicate name '" + n + "'");
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = strip_comment(raw);
    if (blank(line)) continue;

    LineParser p{line, lineno};
    Stmt st;
    st.pos = {lineno, p.i + 1};
    p.skip_ws();
    st.pos.col = p.i + 1;

    if (std::isdigit(static_cast<unsigned char>(line[p.i]))) {
      // N-cell NAME [: SRC -> / => TGT]
      st.kind = Stmt::Kind::Declare;
      st.dim = p.number();
      p.expect_lit("-cell");
      std::size_t col = 0;
      st.name = p.ident(&col);
      if (st.dim == 0) {
        p.expect_end();
      } else {
        p.expect_lit(":");
        std::size_t scol = 0, tcol = 0;
        st.src = p.ident(&scol);
        use_name(p, st.src, scol);
        if (st.dim == 1) {
          if (p.peek_lit("=>")) p.err_here("dimension 1 declarations use '->'");
          p.expect_lit("->");
        } else {
          if (p.peek_lit("->")) p.err_here("declarations above dimension 1 use '=>'");
          p.expect_lit("=>");
        }
        st.tgt = p.ident(&tcol);
        use_name(p, st.tgt, tcol);
        p.expect_end();
      }
      bind_name(p, st.name, col);
    } else {
      std::size_t kwcol = 0;
      std::string kw = p.ident(&kwcol);
      if (kw == "let") {
        st.kind = Stmt::Kind::Let;
        std::size_t ncol = 0;
        st.name = p.ident(&ncol);
        p.expect_lit("=");
        std::size_t bcol = 0;
        st.builder = p.ident(&bcol);
        if (!known_builder(st.builder)) p.err(bcol, "unknown builder '" + st.builder + "'");
        p.expect_lit("(");
        if (!p.peek_lit(")")) {
          for (;;) {
            std::size_t acol = 0;
            std::string a = p.ident(&acol);
            use_name(p, a, acol);
            st.args.push_back(a);
            if (p.peek_lit(",")) {
              p.expect_lit(",");
              continue;
            }
            break;
          }
        }
        p.expect_lit(")");
        p.expect_end();
        if (st.args.size() != builder_arity(st.builder))
          p.err(bcol, "builder '" + st.builder + "' takes " +
                          std::to_string(builder_arity(st.builder)) + " arguments, got " +
                          std::to_string(st.args.size()));
        bind_name(p, st.name, ncol);
      } else if (kw == "assert") {
        st.kind = Stmt::Kind::Assert;
        std::size_t fcol = 0;
        std::string fn = p.ident(&fcol);
        auto one = [&]() {
          p.expect_lit("(");
          std::size_t c = 0;
          std::string a = p.ident(&c);
          use_name(p, a, c);
          st.args.push_back(a);
        };
        auto comma_one = [&]() {
          p.expect_lit(",");
          std::size_t c = 0;
          std::string a = p.ident(&c);
          use_name(p, a, c);
          st.args.push_back(a);
        };
        if (fn == "wf") {
          st.assert_kind = Stmt::AssertKind::Wf;
          one();
          p.expect_lit(")");
        } else if (fn == "parallel" || fn == "equal") {
          st.assert_kind = fn == "parallel" ? Stmt::AssertKind::Parallel : Stmt::AssertKind::Equal;
          one();
          comma_one();
          p.expect_lit(")");
        } else if (fn == "boundary") {
          st.assert_kind = Stmt::AssertKind::Boundary;
          one();
          p.expect_lit(")");
          p.expect_lit("=");
          p.expect_lit("(");
          std::size_t c = 0;
          std::string y = p.ident(&c);
          use_name(p, y, c);
          st.args.push_back(y);
          comma_one();
          p.expect_lit(")");
        } else {
          p.err(fcol, "unknown assertion '" + fn + "' (wf, parallel, equal, boundary)");
        }
        p.expect_end();
      } else if (kw == "print") {
        st.kind = Stmt::Kind::Print;
        std::size_t fcol = 0;
        std::string fn = p.ident(&fcol);
        if (fn == "boundary")
          st.print_kind = Stmt::PrintKind::Boundary;
        else if (fn == "term")
          st.print_kind = Stmt::PrintKind::Term;
        else if (fn == "tree")
          st.print_kind = Stmt::PrintKind::Tree;
        else
          p.err(fcol, "unknown print directive '" + fn + "' (boundary, term, tree)");
        p.expect_lit("(");
        std::size_t c = 0;
        std::string a = p.ident(&c);
        use_name(p, a, c);
        st.args.push_back(a);
        p.expect_lit(")");
        p.expect_end();
      } else {
        p.err(kwcol, "expected a declaration, let, assert, or print");
      }
    }
    out.stmts.push_back(std::move(st));
  }
  return out;
}

// ---------------------------------------------------------------------------
// pretty printing and structural equality
// ---------------------------------------------------------------------------

namespace {

std::string stmt_text(const Stmt& st) {
  std::ostringstream o;
  switch (st.kind) {
    case Stmt::Kind::Declare:
      o << st.dim << "-cell " << st.name;
      if (st.dim == 1) o << " : " << st.src << " -> " << st.tgt;
      if (st.dim >= 2) o << " : " << st.src << " => " << st.tgt;
      break;
    case Stmt::Kind::Let: {
      o << "let " << st.name << " = " << st.builder << "(";
      for (std::size_t i = 0; i < st.args.size(); ++i) o << (i ? ", " : "") << st.args[i];
      o << ")";
      break;
    }
    case Stmt::Kind::Assert:
      o << "assert ";
      switch (st.assert_kind) {
        case Stmt::AssertKind::Wf: o << "wf(" << st.args[0] << ")"; break;
        case Stmt::AssertKind::Parallel: o << "parallel(" << st.args[0] << ", " << st.args[1] << ")"; break;
        case Stmt::AssertKind::Equal: o << "equal(" << st.args[0] << ", " << st.args[1] << ")"; break;
        case Stmt::AssertKind::Boundary:
          o << "boundary(" << st.args[0] << ") = (" << st.args[1] << ", " << st.args[2] << ")";
          break;
      }
      break;
    case Stmt::Kind::Print:
      o << "print ";
      switch (st.print_kind) {
        case Stmt::PrintKind::Boundary: o << "boundary(" << st.args[0] << ")"; break;
        case Stmt::PrintKind::Term: o << "term(" << st.args[0] << ")"; break;
        case Stmt::PrintKind::Tree: o << "tree(" << st.args[0] << ")"; break;
      }
      break;
  }
  return o.str();
}

}  // namespace

std::string pretty_print(const Script& s) {
  std::ostringstream o;
  for (const Stmt& st : s.stmts) o << stmt_text(st) << "\n";
  return o.str();
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  // Source positions are presentation, not content.
  return a.kind == b.kind && a.name == b.name && a.dim == b.dim && a.src == b.src &&
         a.tgt == b.tgt && a.builder == b.builder && a.args == b.args &&
         a.assert_kind == b.assert_kind && a.print_kind == b.print_kind;
}

bool script_equal(const Script& a, const Script& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!stmt_equal(a.stmts[i], b.stmts[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------

namespace {

std::string brief_cell(const CellPtr& c) {
  return operad::show_op(c->term) + " @ " + pasting::show_tree(c->pd.tree);
}

}  // namespace

RunResult run_script_env(const Script& s) {
  using namespace omega::weakcat;
  RunResult rr;
  rr.computad = std::make_shared<Computad>();
  Computad& C = *rr.computad;
  auto& env = rr.env;

  for (const Stmt& st : s.stmts) {
    StmtOutcome oc;
    oc.pos = st.pos;
    oc.text = stmt_text(st);
    auto lookup = [&](const std::string& n) -> CellPtr {
      auto it = env.find(n);
      if (it == env.end())
        throw PreconditionError("operand '" + n + "' is unbound (its defining statement failed)");
      return it->second;
    };
    try {
      switch (st.kind) {
        case Stmt::Kind::Declare: {
          if (st.dim == 0) {
            env[st.name] = C.declare(st.name);
          } else {
            CellPtr src = lookup(st.src), tgt = lookup(st.tgt);
            if (src->dim() + 1 != st.dim)
              throw PreconditionError("declared as a " + std::to_string(st.dim) +
                                      "-cell but the boundary has dimension " +
                                      std::to_string(src->dim()));
            env[st.name] = C.declare(st.name, src, tgt);
          }
          break;
        }
        case Stmt::Kind::Let: {
          std::vector<CellPtr> args;
          args.reserve(st.args.size());
          for (const auto& a : st.args) args.push_back(lookup(a));
          env[st.name] = run_builder(C, st.builder, args);
          oc.detail = "dim " + std::to_string(env[st.name]->dim()) + " over " +
                      pasting::show_tree(env[st.name]->pd.tree);
          break;
        }
        case Stmt::Kind::Assert: {
          switch (st.assert_kind) {
            case Stmt::AssertKind::Wf: {
              std::string why;
              oc.ok = validate_cell(C, lookup(st.args[0]), &why);
              if (!oc.ok) oc.detail = why;
              break;
            }
            case Stmt::AssertKind::Parallel:
              oc.ok = parallel(C, lookup(st.args[0]), lookup(st.args[1]));
              if (!oc.ok) oc.detail = "cells are not parallel";
              break;
            case Stmt::AssertKind::Equal:
              oc.ok = cells_equal(lookup(st.args[0]), lookup(st.args[1]));
              if (!oc.ok) oc.detail = "cells differ";
              break;
            case Stmt::AssertKind::Boundary: {
              CellPtr x = lookup(st.args[0]);
              CellPtr want_s = lookup(st.args[1]), want_t = lookup(st.args[2]);
              bool s_ok = cells_equal(boundary(C, x, true), want_s);
              bool t_ok = cells_equal(boundary(C, x, false), want_t);
              oc.ok = s_ok && t_ok;
              if (!oc.ok)
                oc.detail = std::string(!s_ok ? "source mismatch" : "") +
                            (!s_ok && !t_ok ? "; " : "") + (!t_ok ? "target mismatch" : "");
              break;
            }
          }
          break;
        }
        case Stmt::Kind::Print: {
          CellPtr x = lookup(st.args[0]);
          switch (st.print_kind) {
            case Stmt::PrintKind::Boundary:
              oc.detail = "source = " + brief_cell(boundary(C, x, true)) +
                          "\ntarget = " + brief_cell(boundary(C, x, false));
              break;
            case Stmt::PrintKind::Term:
              oc.detail = operad::show_op(x->term);
              break;
            case Stmt::PrintKind::Tree:
              oc.detail = pasting::show_tree(x->pd.tree);
              break;
          }
          break;
        }
      }
    } catch (const KernelError& e) {
      oc.ok = false;
      oc.detail = e.what();
    }
    (oc.ok ? rr.report.passed : rr.report.failed)++;
    rr.report.outcomes.push_back(std::move(oc));
  }
  return rr;
}

RunReport run_script(const Script& s) { return run_script_env(s).report; }

RunReport run_script_text(const std::string& text) { return run_script(parse_script(text)); }

std::string RunReport::to_text() const {
  std::ostringstream o;
  for (const StmtOutcome& oc : outcomes) {
    o << "line " << oc.pos.line << ": " << (oc.ok ? "ok    " : "FAIL  ") << oc.text << "\n";
    if (!oc.detail.empty()) {
      std::istringstream d(oc.detail);
      std::string dl;
      while (std::getline(d, dl)) o << "    " << (oc.ok ? "" : "! ") << dl << "\n";
    }
  }
  o << "summary: passed " << passed << ", failed " << failed << ", total "
    << outcomes.size() << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

namespace {

std::string canonical_script(const std::string& builder) {
  const std::string chain3 =
      "0-cell a\n0-cell b\n0-cell c\n0-cell d\n"
      "1-cell f : a -> b\n1-cell g : b -> c\n1-cell h : c -> d\n";
  if (builder == "comp0")
    return "0-cell a\n0-cell b\n0-cell c\n1-cell f : a -> b\n1-cell g : b -> c\n"
           "let result = comp0(f, g)\n";
  if (builder == "comp1")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\n1-cell g : a -> b\n1-cell h : a -> b\n"
           "2-cell u : f => g\n2-cell v : g => h\n"
           "let result = comp1(u, v)\n";
  if (builder == "comp2")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\n1-cell g : a -> b\n"
           "2-cell u : f => g\n2-cell v : f => g\n2-cell w : f => g\n"
           "3-cell M : u => v\n3-cell N : v => w\n"
           "let result = comp2(M, N)\n";
  if (builder == "comp3")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\n1-cell g : a -> b\n"
           "2-cell u : f => g\n2-cell v : f => g\n"
           "3-cell M : u => v\n3-cell N : u => v\n3-cell O : u => v\n"
           "4-cell P : M => N\n4-cell Q : N => O\n"
           "let result = comp3(P, Q)\n";
  if (builder == "id")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\nlet result = id(f)\n";
  if (builder == "assoc") return chain3 + "let result = assoc(f, g, h)\n";
  if (builder == "unitorL")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\nlet result = unitorL(f)\n";
  if (builder == "unitorR")
    return "0-cell a\n0-cell b\n1-cell f : a -> b\nlet result = unitorR(f)\n";
  if (builder == "exch")
    return "0-cell a\n0-cell b\n0-cell c\n"
           "1-cell f0 : a -> b\n1-cell f1 : a -> b\n1-cell f2 : a -> b\n"
           "1-cell g0 : b -> c\n1-cell g1 : b -> c\n1-cell g2 : b -> c\n"
           "2-cell F1 : f0 => f1\n2-cell F2 : f1 => f2\n"
           "2-cell G1 : g0 => g1\n2-cell G2 : g1 => g2\n"
           "let result = exch(F1, F2, G1, G2)\n";
  if (builder == "pentagon")
    return chain3 + "0-cell e\n1-cell i : d -> e\nlet result = pentagon(f, g, h, i)\n";
  if (builder == "triangle")
    return "0-cell a\n0-cell b\n0-cell c\n1-cell f : a -> b\n1-cell g : b -> c\n"
           "let result = triangle(f, g)\n";
  if (builder == "naturality")
    return chain3 + "1-cell f2 : a -> b\n2-cell F : f => f2\n"
           "let result = naturality(F, g, h)\n";
  if (builder == "braid" || builder == "braidInv")
    return "0-cell star\nlet i = id(star)\n2-cell a : i => i\n2-cell b : i => i\n"
           "let result = " + builder + "(a, b)\n";
  if (builder == "inv")
    return chain3 + "let al = assoc(f, g, h)\nlet result = inv(al)\n";
  if (builder == "coh")
    return chain3 +
           "let fg = comp0(f, g)\nlet gh = comp0(g, h)\n"
           "let l = comp0(fg, h)\nlet r = comp0(f, gh)\n"
           "let result = coh(l, r)\n";
  throw ParseError("derive: unknown builder '" + builder + "'");
}

}  // namespace

std::string derive_transcript(const std::string& builder) {
  std::string text = canonical_script(builder) +
                     "assert wf(result)\nprint boundary(result)\nprint term(result)\n"
                     "print tree(result)\n";
  RunResult rr = run_script_env(parse_script(text));
  std::string out = rr.report.to_text();
  auto it = rr.env.find("result");
  if (it != rr.env.end()) out += "json: " + weakcat::cell_to_json(it->second) + "\n";
  return out;
}

}  // namespace omega::script
