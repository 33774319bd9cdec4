#include <benchmark/benchmark.h>

#include "omega/operad.hpp"
#include "omega/pasting.hpp"
#include "omega/weakcat.hpp"

namespace {

// Normalizing a left-branching chain of binary substitutions of width n.
void BM_normalize_chain(benchmark::State& state) {
  using namespace omega::operad;
  const std::size_t width = static_cast<std::size_t>(state.range(0));
  auto b = bin_term(1, 0);
  auto acc = b;
  for (std::size_t i = 2; i < width; ++i) {
    std::map<omega::pasting::PosKey, OpTermPtr> labels;
    auto arity = op_arity(acc);
    auto scheme = omega::pasting::scheme_of_tree(arity);
    for (std::size_t p = 0; p < scheme.gset.card[0]; ++p) labels[{0, p}] = unit_op(0);
    for (std::size_t p = 0; p < scheme.gset.card[1]; ++p)
      labels[{1, p}] = p == 0 ? b : unit_op(1);
    acc = comp_op(acc, labels);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_op(acc));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(width));
}

// Monad multiplication over a random nested diagram in the reference
// globular set, including validity checks and provenance.
void BM_mu_pd(benchmark::State& state) {
  using namespace omega::pasting;
  omega::globular::FiniteGlobularSet X;
  X.card = {4, 7, 4};
  X.src = {{0, 0, 0, 0, 1, 2, 2}, {0, 1, 2, 5}};
  X.tgt = {{1, 1, 1, 1, 2, 3, 3}, {1, 2, 3, 6}};
  Rng rng(7);
  std::vector<NestedPd> pool;
  while (pool.size() < 8) {
    auto n = random_nested(rng, X, 2, static_cast<std::size_t>(state.range(0)));
    if (n) pool.push_back(*n);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_pd(X, pool[i++ % pool.size()]));
  }
}

// The full braiding construction for two endomorphism 2-cells, including
// all six steps, the composite, its inverse, and the deep-normalization
// probe for the cancellation cell.
void BM_eh_braid(benchmark::State& state) {
  using namespace omega::weakcat;
  for (auto _ : state) {
    Computad C;
    auto star = C.declare("star");
    auto id1 = weak_id(C, star);
    auto a = C.declare("a", id1, id1);
    auto b = C.declare("b", id1, id1);
    benchmark::DoNotOptimize(eckmann_hilton(C, a, b));
  }
}

BENCHMARK(BM_normalize_chain)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_mu_pd)->Arg(3)->Arg(4);
BENCHMARK(BM_eh_braid);

}  // namespace

BENCHMARK_MAIN();
