#include <set>

#include "doctest.h"
#include "omega/globular.hpp"

using namespace omega;
using namespace omega::globular;

TEST_CASE("globes and spheres have the expected shapes") {
  auto g0 = standard_globe(0);
  CHECK(g0.card == std::vector<std::size_t>{1});
  CHECK(g0.valid());

  auto g2 = standard_globe(2);
  CHECK(g2.card == std::vector<std::size_t>{2, 2, 1});
  CHECK(g2.valid());
  CHECK(g2.total_cells() == 5);
  // both 1-cells run from the source point to the target point
  CHECK(g2.src_of(1, 0) == g2.src_of(1, 1));
  CHECK(g2.tgt_of(1, 0) == g2.tgt_of(1, 1));

  auto s0 = boundary_sphere(0);
  CHECK(s0.total_cells() == 0);
  auto s2 = boundary_sphere(2);
  CHECK(s2.card == std::vector<std::size_t>{2, 2});
  CHECK(s2.valid());

  for (std::size_t n = 1; n <= 4; ++n) {
    auto inc = sphere_into_globe(n);
    CHECK(map_valid(boundary_sphere(n), standard_globe(n), inc));
  }
}

TEST_CASE("map validity, identity, composition") {
  auto g1 = standard_globe(1);
  auto idm = identity_map(g1);
  CHECK(map_valid(g1, g1, idm));
  CHECK(compose_maps(g1, g1, g1, idm, idm) == idm);

  // the map collapsing the 1-globe onto a point fails globularity unless the
  // target has a loop
  FiniteGlobularSet pt = standard_globe(0);
  GlobularMap collapse;
  collapse.level = {{0, 0}, {0}};
  CHECK(!map_valid(g1, pt, collapse));  // no 1-cells in the point

  FiniteGlobularSet loop;
  loop.card = {1, 1};
  loop.src = {{0}};
  loop.tgt = {{0}};
  CHECK(loop.valid());
  CHECK(map_valid(g1, loop, collapse));
}

TEST_CASE("disjoint union and pushout gluing") {
  auto g1 = standard_globe(1);
  GlobularMap inl, inr;
  auto two = disjoint_union(g1, g1, &inl, &inr);
  CHECK(two.card == std::vector<std::size_t>{4, 2});
  CHECK(map_valid(g1, two, inl));
  CHECK(map_valid(g1, two, inr));

  // glue two arrows end to start: a -> b -> c
  auto pt = standard_globe(0);
  GlobularMap to_tgt, to_src;
  to_tgt.level = {{1}};  // the point lands on the target of the left arrow
  to_src.level = {{0}};  // and on the source of the right arrow
  GlobularMap jl, jr;
  auto chain = glue(g1, g1, pt, to_tgt, to_src, &jl, &jr);
  CHECK(chain.valid());
  CHECK(chain.card == std::vector<std::size_t>{3, 2});
  CHECK(map_valid(g1, chain, jl));
  CHECK(map_valid(g1, chain, jr));
  // the shared point is hit from both sides
  CHECK(jl(0, 1) == jr(0, 0));

  // gluing both endpoints crosswise yields a two-arrow cycle
  FiniteGlobularSet two_pts;
  two_pts.card = {2};
  GlobularMap straight, crossed;
  straight.level = {{0, 1}};
  crossed.level = {{1, 0}};
  auto cycle = glue(g1, g1, two_pts, straight, crossed);
  CHECK(cycle.valid());
  CHECK(cycle.card == std::vector<std::size_t>{2, 2});
}

TEST_CASE("hom enumeration agrees with hom_count and is valid") {
  auto g1 = standard_globe(1);
  auto g2 = standard_globe(2);
  auto s2 = boundary_sphere(2);

  auto maps = enumerate_globular_maps(s2, g2);
  CHECK(maps.size() == hom_count(s2, g2));
  CHECK(maps.size() == 4);  // one map per ordered pair of parallel 1-cells
  std::set<GlobularMap> distinct(maps.begin(), maps.end());
  CHECK(distinct.size() == maps.size());
  for (const auto& m : maps) CHECK(map_valid(s2, g2, m));

  CHECK(hom_count(g1, g2) == 2);
  CHECK(hom_count(standard_globe(0), g2) == 2);
}

TEST_CASE("parallel pairs and representability") {
  auto g2 = standard_globe(2);
  CHECK(parallel_pairs(g2, 1).size() == 4);  // ordered pairs of 0-cells
  CHECK(parallel_pairs(g2, 2).size() == 4);
  CHECK(parallel_pairs(g2, 3).size() == 1);

  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(check_representability(g2, n));
    CHECK(check_representability(boundary_sphere(3), n));
    CHECK(check_representability(standard_globe(3), n));
  }

  // a discrete set and a set with loops
  FiniteGlobularSet disc;
  disc.card = {3};
  CHECK(check_representability(disc, 1));
  FiniteGlobularSet loops;
  loops.card = {1, 2, 2};
  loops.src = {{0, 0}, {0, 1}};
  loops.tgt = {{0, 0}, {0, 1}};
  REQUIRE(loops.valid());
  for (std::size_t n = 1; n <= 3; ++n) CHECK(check_representability(loops, n));
}

TEST_CASE("exhaustive representability sweep is clean") {
  auto rep = run_representability_sweep(5, 4, 3);
  CHECK(rep.sets_checked > 100);
  CHECK(rep.failures == 0);
}

TEST_CASE("globular set enumeration produces valid, distinct sets") {
  auto sets = enumerate_globular_sets(4, 3);
  CHECK(!sets.empty());
  std::set<std::string> seen;
  bool found_g1 = false;
  for (const auto& X : sets) {
    CHECK(X.valid());
    CHECK(X.total_cells() <= 4);
    CHECK(X.dim() <= 3);
    CHECK(seen.insert(to_json(X)).second);
    if (X == standard_globe(1)) found_g1 = true;
  }
  CHECK(found_g1);

  // enumeration is deterministic
  CHECK(enumerate_globular_sets(4, 3) == sets);
}

TEST_CASE("json round trip") {
  for (std::size_t n = 0; n <= 3; ++n) {
    auto g = standard_globe(n);
    CHECK(globular_set_from_json(to_json(g)) == g);
  }
  CHECK_THROWS_AS(globular_set_from_json("not json"), ParseError);
}

TEST_CASE("validity catches broken globularity") {
  FiniteGlobularSet bad2;
  bad2.card = {3, 2, 1};
  bad2.src = {{0, 1}, {0}};
  bad2.tgt = {{1, 2}, {1}};  // s(src 2-cell)=0 but s(tgt 2-cell)=1
  CHECK(!bad2.valid());

  FiniteGlobularSet oob;
  oob.card = {1, 1};
  oob.src = {{5}};
  oob.tgt = {{0}};
  CHECK(!oob.valid());
}
