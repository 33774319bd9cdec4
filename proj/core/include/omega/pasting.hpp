#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "omega/foundations.hpp"
#include "omega/globular.hpp"

namespace omega::pasting {

// ---------------------------------------------------------------------------
// Pasting trees
// ---------------------------------------------------------------------------

// A pasting tree of dimension n: dimension-0 trees are leaves; a tree of
// dimension n >= 1 is a finite (possibly empty) list of trees of dimension
// n-1. Its cells ("positions"): the 0-cells of [p1..pm] form the chain
// 0..m; the d-cells (d >= 1) are the (d-1)-cells of the kids, shifted one
// dimension up.
struct PdTree {
  std::size_t dim = 0;
  std::vector<PdTree> kids;  // each of dimension dim-1; empty when dim == 0

  bool valid() const;
  friend bool operator==(const PdTree&, const PdTree&) = default;
};
bool operator<(const PdTree& a, const PdTree& b);

// Textual form: "o" for the 0-tree, otherwise "pdN:[...]" with nested
// bracket lists bottoming out at "o" (e.g. "pd2:[[o,o,o],[],[o]]").
std::string show_tree(const PdTree& t);
PdTree parse_tree(const std::string& text);

PdTree globe_tree(std::size_t n);
// Shape of the binary composite of two n-globes along dimension k:
// compose_trees(k, globe, globe).
PdTree glb_tree(std::size_t n, std::size_t k);

// The (n-1)-dimensional boundary tree (kids-wise for n >= 2, the point for
// n == 1).
PdTree tree_boundary(const PdTree& t);

// Glue along the k-dimensional boundary: for k == 0 concatenate the kid
// lists, for k >= 1 zip the kids with compose along k-1. Throws when the
// k-boundaries disagree.
PdTree compose_trees(std::size_t k, const PdTree& a, const PdTree& b);

// The degenerate (n+1)-tree with the same positions in dimensions <= n.
PdTree identity_tree(const PdTree& t);

std::size_t cells_at(const PdTree& t, std::size_t d);  // number of d-positions
std::size_t top_cells(const PdTree& t);                // cells_at(t, t.dim)

// ---------------------------------------------------------------------------
// Position schemes
// ---------------------------------------------------------------------------

// Position key: (dimension, index) in the canonical numbering below.
using PosKey = std::pair<std::size_t, std::size_t>;

// Addresses: a 0-cell of [p1..pm] has address [j] (j in 0..m); a d-cell
// (d >= 1) has address [i] ++ (address of a (d-1)-cell of kid i). Positions
// of each dimension are numbered in lexicographic address order, which
// lists them column by column.
struct TreeScheme {
  PdTree tree;
  globular::FiniteGlobularSet gset;
  std::vector<std::vector<std::vector<std::size_t>>> addr;    // addr[d][i]
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index;  // per dim

  std::size_t index_of(std::size_t d, const std::vector<std::size_t>& a) const {
    return index.at(d).at(a);
  }
  const std::vector<std::size_t>& addr_of(std::size_t d, std::size_t i) const {
    return addr.at(d).at(i);
  }
};

TreeScheme scheme_of_tree(const PdTree& t);

// Globular embedding of scheme(tree_boundary(t)) into scheme(t); the top
// cells of the boundary land on the source (resp. target) side.
globular::GlobularMap face_embedding(const PdTree& t, bool src_side);

// Position maps of the glued tree: where each position of a (resp. b) lands
// in compose_trees(k, a, b). Shared boundary positions are hit from both
// sides.
struct ComposedTreePositions {
  PdTree tree;
  std::map<PosKey, PosKey> from_left;
  std::map<PosKey, PosKey> from_right;
};
ComposedTreePositions compose_trees_pos(std::size_t k, const PdTree& a, const PdTree& b);

// ---------------------------------------------------------------------------
// Labelled pasting diagrams (elements of the free strict omega-category)
// ---------------------------------------------------------------------------

// A pasting diagram in the globular set X: a tree plus a globular map from
// its scheme into X.
struct LabeledPd {
  PdTree tree;
  globular::GlobularMap labels;

  std::size_t dim() const { return tree.dim; }
  std::size_t label_at(std::size_t d, std::size_t i) const { return labels(d, i); }
  friend bool operator==(const LabeledPd&, const LabeledPd&) = default;
};
bool operator<(const LabeledPd& a, const LabeledPd& b);

bool pd_valid(const globular::FiniteGlobularSet& X, const LabeledPd& p);

// Unit of the monad: the one-position diagram of a cell, with its iterated
// boundaries at the lower positions.
LabeledPd eta_pd(const globular::FiniteGlobularSet& X, std::size_t d, std::size_t cell);

// Restriction along face_embedding (source or target side).
LabeledPd pd_boundary(const LabeledPd& p, bool src_side);

// The k-fold iterated boundary (dimension k result).
LabeledPd pd_boundary_to(const LabeledPd& p, std::size_t k, bool src_side);

// Strict composition: glue along the shared k-boundary. Requires the raw
// boundary diagrams pd_boundary_to(a, k, tgt) and pd_boundary_to(b, k, src)
// to be equal. Optionally reports the position maps.
LabeledPd compose_pd(const globular::FiniteGlobularSet& X, std::size_t k, const LabeledPd& a,
                     const LabeledPd& b, ComposedTreePositions* pos = nullptr);

// Strict identity: degenerate diagram one dimension up (same labels).
LabeledPd identity_pd(const LabeledPd& p);

std::string pd_to_json(const LabeledPd& p);
LabeledPd pd_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Generic evaluation of a labelled tree in a strict algebra
// ---------------------------------------------------------------------------

// Evaluates the canonical composite of a tree in any "strict algebra":
// columns compose along their base dimension left to right, empty trees
// contribute iterated identities of their base cell. label(d, addr) supplies
// the value at the position with the given address.
template <class Cell>
struct EvalAlgebra {
  std::function<Cell(std::size_t d, const std::vector<std::size_t>& addr)> label;
  std::function<Cell(std::size_t k, const Cell&, const Cell&)> comp;
  std::function<Cell(const Cell&)> ident;
};

namespace detail {
template <class Cell>
Cell eval_susp(const EvalAlgebra<Cell>& alg, const PdTree& t, std::size_t base,
               std::vector<std::size_t>& prefix) {
  if (t.dim == 0) {
    prefix.push_back(0);
    Cell c = alg.label(base, prefix);
    prefix.pop_back();
    return c;
  }
  if (t.kids.empty()) {
    prefix.push_back(0);
    Cell c = alg.label(base, prefix);
    prefix.pop_back();
    for (std::size_t j = 0; j < t.dim; ++j) c = alg.ident(c);
    return c;
  }
  prefix.push_back(0);
  Cell acc = eval_susp(alg, t.kids[0], base + 1, prefix);
  prefix.pop_back();
  for (std::size_t i = 1; i < t.kids.size(); ++i) {
    prefix.push_back(i);
    Cell next = eval_susp(alg, t.kids[i], base + 1, prefix);
    prefix.pop_back();
    acc = alg.comp(base, acc, next);
  }
  return acc;
}
}  // namespace detail

template <class Cell>
Cell eval_pd(const EvalAlgebra<Cell>& alg, const PdTree& tree) {
  std::vector<std::size_t> prefix;
  return detail::eval_susp(alg, tree, 0, prefix);
}

// ---------------------------------------------------------------------------
// Monad multiplication with provenance
// ---------------------------------------------------------------------------

// Tree-level substitution: an inner tree of matching dimension for every
// position of the outer tree, with tree-boundary compatibility at the faces.
// Returns the substituted tree together with the total forward provenance
// (outer position, inner position) -> result position.
struct MuTreeResult {
  PdTree tree;
  // fwd[outer position][inner position] = result position; total over all
  // positions of the outer tree.
  std::map<PosKey, std::map<PosKey, PosKey>> fwd;
};
MuTreeResult mu_tree(const PdTree& outer, const std::map<PosKey, PdTree>& inner);

// An element of T(T(X)): inner diagrams for all positions of the outer tree.
struct NestedPd {
  PdTree outer;
  std::map<PosKey, LabeledPd> inner;

  friend bool operator==(const NestedPd&, const NestedPd&) = default;
};

// Boundary of a nested diagram as an element of T(T(X)) one dimension down.
NestedPd nested_boundary(const NestedPd& n, bool src_side);

bool nested_valid(const globular::FiniteGlobularSet& X, const NestedPd& n);

struct MuPdResult {
  LabeledPd pd;
  std::map<PosKey, std::map<PosKey, PosKey>> fwd;
};
// Monad multiplication: substitute the inner diagrams into the outer tree.
// Checks nested validity; provenance as in mu_tree.
MuPdResult mu_pd(const globular::FiniteGlobularSet& X, const NestedPd& n);

// eta at the level of T(TX): the one-position nested diagram of p.
NestedPd eta_outer(const globular::FiniteGlobularSet& X, const LabeledPd& p);
// T(eta): replace every label of p by its eta diagram.
NestedPd map_eta(const globular::FiniteGlobularSet& X, const LabeledPd& p);

// ---------------------------------------------------------------------------
// Random generation and law suites
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

PdTree random_tree(Rng& rng, std::size_t dim, std::size_t max_width);
// Random tree with prescribed one-dimension-down boundary.
PdTree random_tree_over(Rng& rng, const PdTree& boundary, std::size_t max_width);

// Complete a labelling of `tree` into X, with the labels at `prescribed`
// positions fixed. Returns nothing when no completion exists.
std::optional<LabeledPd> random_labels(Rng& rng, const globular::FiniteGlobularSet& X,
                                       const PdTree& tree,
                                       const std::map<PosKey, std::size_t>& prescribed = {});

// Random diagram of the given dimension; resamples trees until a labelling
// completes.
std::optional<LabeledPd> random_pd(Rng& rng, const globular::FiniteGlobularSet& X,
                                   std::size_t dim, std::size_t max_width,
                                   std::size_t attempts = 32);

// Random diagram whose iterated source face along dimension k equals the
// given diagram.
std::optional<LabeledPd> random_pd_with_source(Rng& rng, const globular::FiniteGlobularSet& X,
                                               std::size_t dim, std::size_t k,
                                               const LabeledPd& face, std::size_t max_width,
                                               std::size_t attempts = 32);

// Random element of T(T(X)) over a random outer tree.
std::optional<NestedPd> random_nested(Rng& rng, const globular::FiniteGlobularSet& X,
                                      std::size_t dim, std::size_t max_width,
                                      std::size_t attempts = 32);

struct SuiteReport {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> failed;
  bool ok() const { return failures == 0; }
};

// Randomized check of the strict-category axioms of the free algebra:
// boundaries of composites, identity boundaries, unit laws, associativity,
// binary and nullary exchange, on diagrams of dimension <= max_dim.
SuiteReport run_strict_axiom_suite(std::size_t budget, std::uint64_t seed,
                                   std::size_t max_dim = 4);

// Randomized check of the monad laws: both unit laws and associativity of
// substitution, on random nested diagrams.
SuiteReport run_monad_law_suite(std::size_t budget, std::uint64_t seed);

// All trees of the given dimension with (top-dimension cell count + root kid
// count) <= max_metric for dim >= 2, or kid count <= max_metric for dim 1;
// for dim >= 3 interior widths are additionally capped by max_metric to keep
// the set finite. Deterministic order: by metric, then textual form.
std::vector<PdTree> enumerate_pd(std::size_t dim, std::size_t max_metric);

}  // namespace omega::pasting
