#include "doctest.h"
#include "omega/operad.hpp"

using namespace omega;
using namespace omega::operad;
using pasting::glb_tree;
using pasting::globe_tree;
using pasting::identity_tree;
using pasting::parse_tree;
using pasting::show_tree;

namespace {

// Positions of a 1-dimensional arity [o * ... * o] with m bars: m+1 points
// and m segments. Builds a full label map sending segment i to seg[i] and
// every point to the 0-unit.
std::map<PosKey, OpTermPtr> line_labels(const std::vector<OpTermPtr>& seg) {
  std::map<PosKey, OpTermPtr> l;
  for (std::size_t i = 0; i <= seg.size(); ++i) l[{0, i}] = unit_op(0);
  for (std::size_t i = 0; i < seg.size(); ++i) l[{1, i}] = seg[i];
  return l;
}

}  // namespace

TEST_CASE("units, binary terms, and their arities") {
  CHECK(op_dim(unit_op(0)) == 0);
  CHECK(op_arity(unit_op(2)) == globe_tree(2));
  CHECK(show_op(unit_op(1)) == "u1");

  CHECK(op_arity(bin_term(1, 0)) == parse_tree("pd1:[o,o]"));
  CHECK(op_arity(bin_term(2, 1)) == parse_tree("pd2:[[o,o]]"));
  CHECK(op_arity(bin_term(2, 0)) == parse_tree("pd2:[[o],[o]]"));
  CHECK(op_arity(bin_term(3, 2)) == parse_tree("pd3:[[[o,o]]]"));
  CHECK(show_op(bin_term(2, 1)) == "bin2_1");

  // the whiskering-style composition is the lift of the one below
  auto b20 = bin_term(2, 0);
  CHECK(ops_equal(op_boundary(b20, true), bin_term(1, 0)));
  CHECK(ops_equal(op_boundary(b20, false), bin_term(1, 0)));
  auto b21 = bin_term(2, 1);
  CHECK(ops_equal(op_boundary(b21, true), unit_op(1)));
  CHECK(ops_equal(op_boundary(b21, false), unit_op(1)));

  for (auto& t : {bin_term(1, 0), bin_term(2, 0), bin_term(2, 1), bin_term(3, 0),
                  bin_term(3, 1), bin_term(3, 2)}) {
    CHECK(validate_op(t));
    CHECK(op_arity(op_boundary(t, true)) == pasting::tree_boundary(op_arity(t)));
  }

  CHECK_THROWS_AS(bin_term(2, 2), PreconditionError);
}

TEST_CASE("constructor preconditions") {
  // lift arity must restrict to the common arity of the pair
  CHECK_THROWS_AS(lift_op("bad", unit_op(1), unit_op(1), glb_tree(2, 0)), PreconditionError);
  // dimension mismatch between the two sides
  CHECK_THROWS_AS(lift_op("bad", unit_op(1), unit_op(2), glb_tree(2, 1)), PreconditionError);
  // substitution labels must cover exactly the arity positions
  std::map<PosKey, OpTermPtr> missing;
  missing[{1, 0}] = unit_op(1);
  CHECK_THROWS_AS(comp_op(unit_op(1), missing), PreconditionError);
  // and carry the right dimensions
  auto bad = line_labels({unit_op(1)});
  bad[{0, 0}] = unit_op(1);
  CHECK_THROWS_AS(comp_op(unit_op(1), bad), PreconditionError);
}

TEST_CASE("rewriting: unit substitution collapses") {
  // e is the non-unit endomorphism lift on the 1-globe arity
  auto e = lift_op("e", unit_op(0), unit_op(0), globe_tree(1));
  REQUIRE(validate_op(e));
  CHECK(!ops_equal(e, unit_op(1)));

  // comp over a unit operation returns the top label
  auto r1 = comp_op(unit_op(1), line_labels({e}));
  CHECK(ops_equal(r1, e));
  CHECK(op_structural_equal(normalize_op(r1), e));

  // comp with only unit labels returns the operation
  auto r2 = comp_op(e, line_labels({unit_op(1)}));
  CHECK(ops_equal(r2, e));

  // both collapse laws together
  auto r12 = comp_op(unit_op(1), line_labels({unit_op(1)}));
  CHECK(ops_equal(r12, unit_op(1)));
}

TEST_CASE("rewriting: nested substitution flattens") {
  auto b = bin_term(1, 0);
  auto e = lift_op("e", unit_op(0), unit_op(0), globe_tree(1));
  // ((e x) y) as comp(comp(b, [e, u]), [u, u]) with an extra outer layer
  auto inner = comp_op(b, line_labels({e, unit_op(1)}));
  auto outer = comp_op(inner, line_labels({unit_op(1), e}));
  auto n = normalize_op(outer);
  REQUIRE(validate_op(n));
  // flattened: a single substitution into the binary lift
  CHECK(n->kind == OpKind::Comp);
  CHECK(n->op->kind == OpKind::Lift);
  CHECK(op_structural_equal(n, comp_op(b, line_labels({e, e}))));
  CHECK(op_arity(n) == op_arity(outer));
  CHECK(ops_equal(outer, comp_op(b, line_labels({e, e}))));
}

TEST_CASE("the two ternary bracketings are distinct operations") {
  auto b = bin_term(1, 0);
  auto tL = comp_op(b, line_labels({b, unit_op(1)}));  // (x y) z
  auto tR = comp_op(b, line_labels({unit_op(1), b}));  // x (y z)
  CHECK(validate_op(tL));
  CHECK(validate_op(tR));
  CHECK(op_arity(tL) == parse_tree("pd1:[o,o,o]"));
  CHECK(op_arity(tR) == parse_tree("pd1:[o,o,o]"));
  CHECK(!ops_equal(tL, tR));
  // they are parallel: both have the point boundaries
  CHECK(ops_equal(op_boundary(tL, true), op_boundary(tR, true)));
}

TEST_CASE("equality ignores lift tags") {
  auto a = lift_op("first", unit_op(1), unit_op(1), glb_tree(2, 1));
  auto b = lift_op("second", unit_op(1), unit_op(1), glb_tree(2, 1));
  CHECK(op_structural_equal(a, b));
  CHECK(ops_equal(a, b));
  CHECK(ops_equal(a, bin_term(2, 1)));
  CHECK(show_op(a) == "first");
}

TEST_CASE("validation rejects non-parallel lifts") {
  auto e = lift_op("e", unit_op(0), unit_op(0), globe_tree(1));
  auto f = lift_op("f", unit_op(1), unit_op(1), parse_tree("pd2:[[o,o]]"));
  auto g = lift_op("g", unit_op(1), e, parse_tree("pd2:[[o,o]]"));
  REQUIRE(validate_op(f));
  REQUIRE(validate_op(g));
  // f and g share the arity but differ on the target boundary
  auto h = lift_op("h", f, g, identity_tree(parse_tree("pd2:[[o,o]]")));
  std::string why;
  CHECK(!validate_op(h, &why));
  CHECK(why == "lift: target boundaries of the operands differ");
}

TEST_CASE("normal forms on random terms") {
  pasting::Rng rng(2024);
  int seen_comp = 0;
  for (int it = 0; it < 120; ++it) {
    auto t = random_op(rng, 1 + it % 3, 3, 3);
    REQUIRE(t);
    REQUIRE(validate_op(t));
    auto n = normalize_op(t);
    CHECK(validate_op(n));
    CHECK(op_dim(n) == op_dim(t));
    CHECK(op_arity(n) == op_arity(t));
    CHECK(ops_equal(n, t));
    // idempotent
    CHECK(op_structural_equal(normalize_op(n), n));
    // strategies agree
    CHECK(op_structural_equal(normalize_op_outermost(t), n));
    // normal shape: unit, lift, or a one-layer substitution into a lift
    if (n->kind == OpKind::Comp) {
      ++seen_comp;
      CHECK(n->op->kind == OpKind::Lift);
      bool all_units = true;
      for (const auto& [p, l] : n->labels) {
        (void)p;
        if (l->kind != OpKind::Unit) all_units = false;
        CHECK(op_structural_equal(normalize_op(l), l));
      }
      CHECK(!all_units);
    }
  }
  CHECK(seen_comp > 0);
}

TEST_CASE("json round trip") {
  pasting::Rng rng(31337);
  for (int it = 0; it < 25; ++it) {
    auto t = random_op(rng, 1 + it % 3, 3, 3);
    auto rt = op_from_json(op_to_json(t));
    CHECK(op_structural_equal(rt, t));
    CHECK(validate_op(rt));
    CHECK(show_op(rt) == show_op(t));  // tags survive the round trip
  }
  CHECK_THROWS_AS(op_from_json("{"), ParseError);
  CHECK_THROWS_AS(op_from_json("{\"kind\":\"frob\"}"), ParseError);
}

TEST_CASE("normalization and confluence suites") {
  auto s1 = run_normalization_suite(80, 11);
  CHECK(s1.cases >= 80);
  CHECK(s1.failures == 0);
  auto s2 = run_confluence_suite(60, 12);
  CHECK(s2.cases >= 60);
  CHECK(s2.failures == 0);
}
