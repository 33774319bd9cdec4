#include <algorithm>
#include <set>

#include "doctest.h"
#include "omega/foundations.hpp"

using namespace omega;
using namespace omega::foundations;

namespace {

// Independent exhaustive enumeration of planar trees with the given leaf
// count whose node arities are drawn from the signature. Used as the oracle
// for count_operations before any count is trusted.
std::vector<PlanarTree> enumerate_trees(const Signature& sig, std::size_t n_leaves) {
  std::vector<PlanarTree> out;
  if (n_leaves == 1) out.push_back(PlanarTree{});
  for (const auto& [name, arity] : sig) {
    (void)name;
    if (arity < 2 || arity > n_leaves) continue;  // nullary/unary have no leaf-bounded towers
    // distribute n_leaves over `arity` children, each at least 1
    std::vector<std::size_t> split(arity, 1);
    std::size_t extra = n_leaves - arity;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t slot, std::size_t left) {
      if (slot + 1 == arity) {
        split[slot] = 1 + left;
        std::vector<std::vector<PlanarTree>> choices;
        for (std::size_t c = 0; c < arity; ++c) choices.push_back(enumerate_trees(sig, split[c]));
        std::vector<std::size_t> pick(arity, 0);
        for (;;) {
          PlanarTree t;
          for (std::size_t c = 0; c < arity; ++c) {
            if (choices[c].empty()) return;
            t.kids.push_back(choices[c][pick[c]]);
          }
          out.push_back(t);
          std::size_t c = arity;
          while (c > 0) {
            --c;
            if (++pick[c] < choices[c].size()) break;
            pick[c] = 0;
            if (c == 0) return;
          }
        }
      } else {
        for (std::size_t take = 0; take <= left; ++take) {
          split[slot] = 1 + take;
          rec(slot + 1, left - take);
        }
      }
    };
    rec(0, extra);
  }
  return out;
}

}  // namespace

TEST_CASE("terms: construction, show, fold") {
  Term t = app("m", {var("x"), app("m", {var("x"), var("x")})});
  CHECK(show_term(t) == "m(x,m(x,x))");
  CHECK(term_height(t) == 3);
  CHECK(term_height(var("x")) == 1);

  // interpret in (N, +) with x = 1: m = addition
  auto value = fold_term<int>(
      t, [](const std::string&) { return 1; },
      [](const std::string&, const std::vector<int>& args) { return args[0] + args[1]; });
  CHECK(value == 3);

  // strict weak ordering sanity (operations sort before variables)
  Term a = var("x"), b = app("m", {var("x"), var("x")});
  CHECK(b < a);
  CHECK(!(a < b));
  CHECK(!(a < a));
}

TEST_CASE("free-algebra chain sizes for the binary signature") {
  Signature sig{{"m", 2}};
  auto sizes = adamek_sizes(sig, {"x"}, 4);
  CHECK(sizes == std::vector<std::size_t>{0, 1, 2, 5, 26});

  // stage k is exactly the terms of height <= k
  auto chain = adamek_chain(sig, {"x"}, 3);
  REQUIRE(chain.size() == 4);
  CHECK(chain[3].size() == 5);
  for (const auto& t : chain[3]) CHECK(term_height(t) <= 3);
  std::set<Term> stage3(chain[3].begin(), chain[3].end());
  CHECK(stage3.count(var("x")) == 1);
  CHECK(stage3.count(app("m", {var("x"), var("x")})) == 1);
  CHECK(stage3.count(app("m", {var("x"), app("m", {var("x"), var("x")})})) == 1);

  // each stage embeds in the next
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    std::set<Term> next(chain[k + 1].begin(), chain[k + 1].end());
    for (const auto& t : chain[k]) CHECK(next.count(t) == 1);
  }

  CHECK_THROWS_AS(adamek_sizes(sig, {"x"}, 9), CapError);
}

TEST_CASE("finite functions and pullback squares") {
  FinFunction idn = fin_identity(3);
  CHECK(idn.valid());
  CHECK(fin_compose(idn, idn) == idn);

  // product square: P = A x B over the point
  //   f : P -> A (first projection), g : P -> B (second),
  //   h : A -> 1, k : B -> 1
  std::size_t A = 2, B = 3;
  FinFunction f{A * B, A, {}}, g{A * B, B, {}};
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t b = 0; b < B; ++b) {
      f.map.push_back(a);
      g.map.push_back(b);
    }
  FinFunction h{A, 1, std::vector<std::size_t>(A, 0)};
  FinFunction k{B, 1, std::vector<std::size_t>(B, 0)};
  CHECK(is_pullback_square(f, g, h, k));

  // dropping one element of P breaks surjectivity onto the fiber product
  FinFunction f2 = f, g2 = g;
  f2.dom = g2.dom = A * B - 1;
  f2.map.pop_back();
  g2.map.pop_back();
  CHECK(!is_pullback_square(f2, g2, h, k));

  // a non-commuting square is rejected
  FinFunction swap{2, 2, {1, 0}};
  CHECK(!is_pullback_square(fin_identity(2), fin_identity(2), swap, fin_identity(2)));
}

TEST_CASE("list monad helpers") {
  CHECK(list_unit(7) == std::vector<int>{7});
  CHECK(list_mult<int>({{1, 2}, {}, {3}}) == std::vector<int>{1, 2, 3});
}

TEST_CASE("planar trees: graft and counting") {
  PlanarTree leaf{};
  PlanarTree m2{0, {leaf, leaf}};
  CHECK(leaf_count(m2) == 2);
  CHECK(tree_height(m2) == 2);

  PlanarTree g = graft(m2, 1, m2);
  CHECK(leaf_count(g) == 3);
  CHECK(g.kids[1] == m2);
  CHECK(g.kids[0] == leaf);

  // grafting at the leftmost leaf instead
  PlanarTree g0 = graft(m2, 0, m2);
  CHECK(g0.kids[0] == m2);
  CHECK(g != g0);

  PlanarTree labeled{5, {}};
  CHECK(leaves(graft(m2, 0, labeled)).front() == 5);
}

TEST_CASE("operation counts match the exhaustive oracle (binary signature)") {
  Signature sig{{"m", 2}};
  std::vector<std::size_t> got, oracle;
  for (std::size_t n = 1; n <= 7; ++n) {
    got.push_back(count_operations(sig, n));
    oracle.push_back(enumerate_trees(sig, n).size());
  }
  CHECK(got == oracle);
  CHECK(got == std::vector<std::size_t>{1, 1, 2, 5, 14, 42, 132});
}

TEST_CASE("operation counts match the oracle on a mixed signature") {
  Signature sig{{"m", 2}, {"t", 3}};
  for (std::size_t n = 1; n <= 5; ++n)
    CHECK(count_operations(sig, n) == enumerate_trees(sig, n).size());
}

TEST_CASE("cartesianness report at reduced size is clean") {
  auto rep = cartesianness_report(3, 3, 2, 2);
  CHECK(rep.squares_checked > 0);
  CHECK(rep.failures == 0);
}
