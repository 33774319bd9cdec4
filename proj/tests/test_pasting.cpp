#include <set>

#include "doctest.h"
#include "omega/pasting.hpp"

using namespace omega;
using namespace omega::pasting;

namespace {

// The worked 2-diagram used throughout: three vertical cells over the first
// arrow, a bare arrow, then one cell over the last arrow.
//
//   X: 0-cells A,B,C,D (0..3); 1-cells f,g,h,i : A->B (0..3), j : B->C (4),
//   k,l : C->D (5,6); 2-cells alpha : f=>g, beta : g=>h, gamma : h=>i,
//   delta : k=>l (0..3).
globular::FiniteGlobularSet figure_set() {
  globular::FiniteGlobularSet X;
  X.card = {4, 7, 4};
  X.src = {{0, 0, 0, 0, 1, 2, 2}, {0, 1, 2, 5}};
  X.tgt = {{1, 1, 1, 1, 2, 3, 3}, {1, 2, 3, 6}};
  return X;
}

LabeledPd figure_pd() {
  LabeledPd P;
  P.tree = parse_tree("pd2:[[o,o,o],[],[o]]");
  P.labels.level = {{0, 1, 2, 3}, {0, 1, 2, 3, 4, 5, 6}, {0, 1, 2, 3}};
  return P;
}

}  // namespace

TEST_CASE("tree text form round trips and rejects malformed input") {
  for (const char* s : {"o", "pd1:[]", "pd1:[o,o,o]", "pd2:[[o,o,o],[],[o]]",
                        "pd3:[[[o,o]]]", "pd3:[[[]],[[]]]"}) {
    auto t = parse_tree(s);
    CHECK(t.valid());
    CHECK(show_tree(t) == s);
    CHECK(parse_tree(show_tree(t)) == t);
  }
  CHECK(parse_tree("o").dim == 0);
  CHECK(parse_tree("pd2:[[o]]").dim == 2);

  CHECK_THROWS_AS(parse_tree("[[o]]"), ParseError);         // missing prefix
  CHECK_THROWS_AS(parse_tree("pd2:[[o]"), ParseError);      // unbalanced
  CHECK_THROWS_AS(parse_tree("pd2:[[x]]"), ParseError);     // junk leaf
  CHECK_THROWS_AS(parse_tree("pd1:[o] trailing"), ParseError);

  PdTree broken;
  broken.dim = 2;
  broken.kids.push_back(PdTree{});  // a 0-dimensional kid under a 2-tree
  CHECK(!broken.valid());
}

TEST_CASE("globes and binary composition shapes") {
  CHECK(show_tree(globe_tree(0)) == "o");
  CHECK(show_tree(globe_tree(1)) == "pd1:[o]");
  CHECK(show_tree(globe_tree(2)) == "pd2:[[o]]");
  CHECK(show_tree(globe_tree(3)) == "pd3:[[[o]]]");

  CHECK(show_tree(glb_tree(1, 0)) == "pd1:[o,o]");
  CHECK(show_tree(glb_tree(2, 0)) == "pd2:[[o],[o]]");
  CHECK(show_tree(glb_tree(2, 1)) == "pd2:[[o,o]]");
  CHECK(show_tree(glb_tree(3, 0)) == "pd3:[[[o]],[[o]]]");
  CHECK(show_tree(glb_tree(3, 1)) == "pd3:[[[o],[o]]]");
  CHECK(show_tree(glb_tree(3, 2)) == "pd3:[[[o,o]]]");

  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 0; k < n; ++k)
      CHECK(glb_tree(n, k) == compose_trees(k, globe_tree(n), globe_tree(n)));
}

TEST_CASE("tree boundaries") {
  CHECK(tree_boundary(parse_tree("pd1:[o,o]")) == parse_tree("o"));
  CHECK(tree_boundary(parse_tree("pd2:[[o,o],[o]]")) == parse_tree("pd1:[o,o]"));
  CHECK(tree_boundary(parse_tree("pd2:[[o,o,o],[],[o]]")) == parse_tree("pd1:[o,o,o]"));
  CHECK(tree_boundary(parse_tree("pd3:[[[o,o]]]")) == parse_tree("pd2:[[o]]"));
  CHECK(tree_boundary(parse_tree("pd3:[[[]],[[]]]")) == parse_tree("pd2:[[o],[o]]"));
  for (std::size_t n = 1; n <= 4; ++n)
    CHECK(tree_boundary(globe_tree(n)) == globe_tree(n - 1));
}

TEST_CASE("the two displayed binary tree composites") {
  CHECK(compose_trees(1, parse_tree("pd2:[[o],[o]]"), parse_tree("pd2:[[o],[]]")) ==
        parse_tree("pd2:[[o,o],[o]]"));
  CHECK(compose_trees(0, parse_tree("pd2:[[o,o,o],[]]"), parse_tree("pd2:[[o]]")) ==
        parse_tree("pd2:[[o,o,o],[],[o]]"));

  // mismatched boundaries are rejected
  CHECK_THROWS_AS(compose_trees(1, parse_tree("pd2:[[o],[o]]"), parse_tree("pd2:[[o]]")),
                  PreconditionError);
}

TEST_CASE("identity trees are degenerate and preserve lower cells") {
  CHECK(identity_tree(parse_tree("pd1:[o,o,o]")) == parse_tree("pd2:[[],[],[]]"));
  CHECK(identity_tree(parse_tree("pd2:[[o,o],[o,o]]")) == parse_tree("pd3:[[[],[]],[[],[]]]"));
  for (const char* s : {"pd1:[o]", "pd2:[[o,o],[o]]", "pd3:[[[o,o]]]"}) {
    auto t = parse_tree(s);
    auto it = identity_tree(t);
    CHECK(it.dim == t.dim + 1);
    CHECK(top_cells(it) == 0);
    for (std::size_t d = 0; d <= t.dim; ++d) CHECK(cells_at(it, d) == cells_at(t, d));
    CHECK(tree_boundary(it) == t);
  }
}

TEST_CASE("position schemes: counts, globes, and face embeddings") {
  auto s = scheme_of_tree(parse_tree("pd2:[[o,o,o],[],[o]]"));
  CHECK(s.gset.card == std::vector<std::size_t>{4, 7, 4});
  CHECK(s.gset.valid());

  CHECK(scheme_of_tree(parse_tree("pd2:[[o],[o]]")).gset.card ==
        std::vector<std::size_t>{3, 4, 2});
  CHECK(scheme_of_tree(parse_tree("pd2:[[o,o],[o,o]]")).gset.card ==
        std::vector<std::size_t>{3, 6, 4});

  for (std::size_t n = 0; n <= 4; ++n)
    CHECK(scheme_of_tree(globe_tree(n)).gset == globular::standard_globe(n));

  // address <-> index tables are mutually inverse
  for (std::size_t d = 0; d < s.addr.size(); ++d)
    for (std::size_t i = 0; i < s.addr[d].size(); ++i)
      CHECK(s.index_of(d, s.addr_of(d, i)) == i);

  for (const char* txt : {"pd1:[o,o]", "pd2:[[o,o,o],[],[o]]", "pd3:[[[o,o]]]"}) {
    auto t = parse_tree(txt);
    auto emb_s = face_embedding(t, true);
    auto emb_t = face_embedding(t, false);
    auto bs = scheme_of_tree(tree_boundary(t)).gset;
    CHECK(map_valid(bs, scheme_of_tree(t).gset, emb_s));
    CHECK(map_valid(bs, scheme_of_tree(t).gset, emb_t));
    CHECK(emb_s != emb_t);  // source and target copies differ at the top
  }
}

TEST_CASE("labeled diagrams: validity, eta, boundaries of the figure") {
  auto X = figure_set();
  REQUIRE(X.valid());
  auto P = figure_pd();
  CHECK(pd_valid(X, P));

  // mislabeling a 2-cell breaks validity
  auto bad = P;
  bad.labels.level[2][3] = 0;  // delta slot filled with alpha: wrong faces
  CHECK(!pd_valid(X, bad));

  // eta of the 2-cell alpha is the labeled 2-globe
  auto e = eta_pd(X, 2, 0);
  CHECK(e.tree == globe_tree(2));
  CHECK(e.labels.level == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 1}, {0}});
  CHECK(pd_valid(X, e));

  // source A ->f B ->j C ->k D and target A ->i B ->j C ->l D
  auto bs = pd_boundary(P, true);
  CHECK(bs.tree == parse_tree("pd1:[o,o,o]"));
  CHECK(bs.labels.level[0] == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(bs.labels.level[1] == std::vector<std::size_t>{0, 4, 5});
  auto bt = pd_boundary(P, false);
  CHECK(bt.labels.level[1] == std::vector<std::size_t>{3, 4, 6});
  CHECK(pd_valid(X, bs));
  CHECK(pd_valid(X, bt));

  // iterated boundary reaches the 0-diagram on A
  auto b0 = pd_boundary_to(P, 0, true);
  CHECK(b0.tree == parse_tree("o"));
  CHECK(b0.labels.level[0] == std::vector<std::size_t>{0});

  // json round trip
  CHECK(pd_from_json(pd_to_json(P)) == P);
}

TEST_CASE("labeled composition reproduces the figure column by column") {
  auto X = figure_set();
  // vertical stack in the first column: alpha .1 beta .1 gamma
  auto ea = eta_pd(X, 2, 0), eb = eta_pd(X, 2, 1), ec = eta_pd(X, 2, 2);
  auto ab = compose_pd(X, 1, ea, eb);
  CHECK(ab.tree == parse_tree("pd2:[[o,o]]"));
  auto abc = compose_pd(X, 1, ab, ec);
  CHECK(abc.tree == parse_tree("pd2:[[o,o,o]]"));
  CHECK(abc.labels.level[2] == std::vector<std::size_t>{0, 1, 2});
  CHECK(abc.labels.level[1] == std::vector<std::size_t>{0, 1, 2, 3});

  // associativity on the nose in the strict algebra
  auto bc = compose_pd(X, 1, eb, ec);
  CHECK(compose_pd(X, 1, ea, bc) == abc);

  // horizontal: (alpha.1beta.1gamma) .0 id_j .0 delta rebuilds the figure
  auto ej = eta_pd(X, 1, 4);
  auto idj = identity_pd(ej);
  CHECK(idj.tree == parse_tree("pd2:[[]]"));
  auto ed = eta_pd(X, 2, 3);
  auto left = compose_pd(X, 0, abc, idj);
  auto whole = compose_pd(X, 0, left, ed);
  CHECK(whole == figure_pd());

  // raw boundary mismatch is rejected
  CHECK_THROWS_AS(compose_pd(X, 0, ea, ea), PreconditionError);
  // unit laws at the identity: p .1 id(tgt p) = p needs the degenerate stack
  auto idt = identity_pd(pd_boundary(ea, false));
  CHECK(compose_pd(X, 1, ea, idt) == ea);
  CHECK(compose_pd(X, 1, identity_pd(pd_boundary(ea, true)), ea) == ea);
}

TEST_CASE("identity diagrams preserve labels") {
  auto X = figure_set();
  auto bs = pd_boundary(figure_pd(), true);
  auto id1 = identity_pd(bs);
  CHECK(id1.tree == parse_tree("pd2:[[],[],[]]"));
  CHECK(id1.labels.level[1] == bs.labels.level[1]);
  CHECK(id1.labels.level[0] == bs.labels.level[0]);
  CHECK(pd_valid(X, id1));
  CHECK(pd_boundary(id1, true) == bs);
  CHECK(pd_boundary(id1, false) == bs);
}

TEST_CASE("generic evaluation: formal composite of the figure") {
  auto tree = parse_tree("pd2:[[o,o,o],[],[o]]");

  EvalAlgebra<std::string> alg;
  alg.label = [](std::size_t d, const std::vector<std::size_t>& a) -> std::string {
    if (d == 2) {
      if (a[0] == 0 && a[1] == 0) return "alpha";
      if (a[0] == 0 && a[1] == 1) return "beta";
      if (a[0] == 0 && a[1] == 2) return "gamma";
      return "delta";
    }
    if (d == 1) return "j";
    return "pt";
  };
  alg.comp = [](std::size_t k, const std::string& x, const std::string& y) {
    return "(" + x + " ." + std::to_string(k) + " " + y + ")";
  };
  alg.ident = [](const std::string& x) { return "id(" + x + ")"; };
  CHECK(eval_pd(alg, tree) == "((((alpha .1 beta) .1 gamma) .0 id(j)) .0 delta)");

  // numeric cross-check in the additive algebra Z/4 with alpha,beta,gamma,
  // delta = 1,2,3,1 and all identities 0
  EvalAlgebra<int> z4;
  z4.label = [](std::size_t d, const std::vector<std::size_t>& a) -> int {
    if (d != 2) return 0;
    if (a[0] == 0 && a[1] == 0) return 1;
    if (a[0] == 0 && a[1] == 1) return 2;
    if (a[0] == 0 && a[1] == 2) return 3;
    return 1;
  };
  z4.comp = [](std::size_t, int x, int y) { return (x + y) % 4; };
  z4.ident = [](int x) { return x; };
  CHECK(eval_pd(z4, tree) == 3);
}

TEST_CASE("monad multiplication: the displayed substitution") {
  auto outer = parse_tree("pd2:[[o,o],[o]]");
  auto so = scheme_of_tree(outer);

  std::map<PosKey, PdTree> inner;
  inner[{2, 0}] = parse_tree("pd2:[[o,o]]");
  inner[{2, 1}] = parse_tree("pd2:[[o]]");
  inner[{2, 2}] = parse_tree("pd2:[[],[o]]");
  for (std::size_t i = 0; i < 3; ++i) {
    auto b = tree_boundary(inner[{2, i}]);
    inner[{1, so.gset.src_of(2, i)}] = b;
    inner[{1, so.gset.tgt_of(2, i)}] = b;
  }
  for (std::size_t i = 0; i < so.gset.card[0]; ++i) inner[{0, i}] = PdTree{};

  auto mu = mu_tree(outer, inner);
  CHECK(mu.tree == parse_tree("pd2:[[o,o,o],[],[o]]"));

  // provenance is total over the outer positions and lands in the result
  auto sr = scheme_of_tree(mu.tree);
  for (std::size_t d = 0; d < so.gset.card.size(); ++d)
    for (std::size_t i = 0; i < so.gset.card[d]; ++i) {
      REQUIRE(mu.fwd.count({d, i}) == 1);
      for (const auto& [ip, rp] : mu.fwd.at({d, i})) {
        (void)ip;
        CHECK(rp.first < sr.gset.card.size());
        CHECK(rp.second < sr.gset.card[rp.first]);
      }
    }

  // incompatible inner boundaries are rejected
  auto bad = inner;
  bad[{2, 1}] = parse_tree("pd2:[[],[o]]");  // boundary pd1:[o,o] vs required pd1:[o]
  CHECK_THROWS_AS(mu_tree(outer, bad), PreconditionError);
}

TEST_CASE("monad unit laws on labeled diagrams") {
  auto X = figure_set();
  Rng rng(99);
  for (int it = 0; it < 40; ++it) {
    auto p = random_pd(rng, X, 1 + it % 3, 3);
    if (!p) continue;
    CHECK(pd_valid(X, *p));
    auto outer = eta_outer(X, *p);
    CHECK(nested_valid(X, outer));
    CHECK(mu_pd(X, outer).pd == *p);
    auto mapped = map_eta(X, *p);
    CHECK(nested_valid(X, mapped));
    CHECK(mu_pd(X, mapped).pd == *p);
  }
}

TEST_CASE("nested boundaries stay valid and commute with mu") {
  auto X = figure_set();
  Rng rng(1234);
  int done = 0;
  for (int it = 0; it < 60 && done < 25; ++it) {
    auto n = random_nested(rng, X, 2, 3);
    if (!n) continue;
    ++done;
    REQUIRE(nested_valid(X, *n));
    auto whole = mu_pd(X, *n);
    if (n->outer.dim > 0) {
      auto nb = nested_boundary(*n, true);
      CHECK(nested_valid(X, nb));
      CHECK(mu_pd(X, nb).pd == pd_boundary(whole.pd, true));
    }
  }
  CHECK(done > 0);
}

TEST_CASE("random generators are deterministic in the seed") {
  Rng a(7), b(7);
  for (int i = 0; i < 20; ++i) CHECK(random_tree(a, 2, 4) == random_tree(b, 2, 4));
}

TEST_CASE("strict axiom and monad law suites") {
  auto s1 = run_strict_axiom_suite(80, 5, 3);
  CHECK(s1.cases >= 80);
  CHECK(s1.failures == 0);
  auto s2 = run_monad_law_suite(60, 6);
  CHECK(s2.cases >= 60);
  CHECK(s2.failures == 0);
}

TEST_CASE("tree enumeration: frozen small cases and the metric bound") {
  auto e1 = enumerate_pd(1, 3);
  REQUIRE(e1.size() == 4);
  CHECK(show_tree(e1[0]) == "pd1:[]");
  CHECK(show_tree(e1[1]) == "pd1:[o]");
  CHECK(show_tree(e1[2]) == "pd1:[o,o]");
  CHECK(show_tree(e1[3]) == "pd1:[o,o,o]");

  auto e2 = enumerate_pd(2, 2);
  REQUIRE(e2.size() == 4);
  CHECK(show_tree(e2[0]) == "pd2:[]");
  CHECK(show_tree(e2[1]) == "pd2:[[]]");
  CHECK(show_tree(e2[2]) == "pd2:[[],[]]");
  CHECK(show_tree(e2[3]) == "pd2:[[o]]");

  auto e3 = enumerate_pd(2, 3);
  REQUIRE(e3.size() == 8);
  std::set<PdTree> members(e3.begin(), e3.end());
  CHECK(members.size() == 8);
  for (const char* s : {"pd2:[]", "pd2:[[]]", "pd2:[[],[]]", "pd2:[[o]]", "pd2:[[],[],[]]",
                        "pd2:[[],[o]]", "pd2:[[o,o]]", "pd2:[[o],[]]"})
    CHECK(members.count(parse_tree(s)) == 1);
  for (const auto& t : e3) {
    CHECK(t.valid());
    CHECK(top_cells(t) + t.kids.size() <= 3);
  }

  // deterministic
  CHECK(enumerate_pd(2, 3) == e3);
}
