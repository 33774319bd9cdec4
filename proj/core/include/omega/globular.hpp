#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "omega/foundations.hpp"

namespace omega::globular {

// A cell is addressed by (dimension, index).
struct CellRef {
  std::size_t dim = 0;
  std::size_t idx = 0;
  friend bool operator==(const CellRef&, const CellRef&) = default;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

// Finite globular set: card[d] counts d-cells; for d >= 1, src[d-1] and
// tgt[d-1] map d-cells to (d-1)-cells. No degeneracies.
struct FiniteGlobularSet {
  std::vector<std::size_t> card;
  std::vector<std::vector<std::size_t>> src;  // src[d-1] : X(d) -> X(d-1)
  std::vector<std::vector<std::size_t>> tgt;

  std::size_t dim() const { return card.empty() ? 0 : card.size() - 1; }
  std::size_t cells(std::size_t d) const { return d < card.size() ? card[d] : 0; }
  std::size_t total_cells() const;
  std::size_t src_of(std::size_t d, std::size_t i) const { return src.at(d - 1).at(i); }
  std::size_t tgt_of(std::size_t d, std::size_t i) const { return tgt.at(d - 1).at(i); }

  // shape sizes consistent, indices in range, and the globular identities
  // ss = st and ts = tt hold
  bool valid() const;

  friend bool operator==(const FiniteGlobularSet&, const FiniteGlobularSet&) = default;
};

// Map of globular sets: level[d] : X(d) -> Y(d), commuting with src/tgt.
struct GlobularMap {
  std::vector<std::vector<std::size_t>> level;

  std::size_t operator()(std::size_t d, std::size_t i) const { return level.at(d).at(i); }
  friend bool operator==(const GlobularMap&, const GlobularMap&) = default;
  friend auto operator<=>(const GlobularMap&, const GlobularMap&) = default;
};

bool map_valid(const FiniteGlobularSet& X, const FiniteGlobularSet& Y, const GlobularMap& f);
GlobularMap identity_map(const FiniteGlobularSet& X);
GlobularMap compose_maps(const FiniteGlobularSet& X, const FiniteGlobularSet& Y,
                         const FiniteGlobularSet& Z, const GlobularMap& g,
                         const GlobularMap& f);  // g after f

// The n-globe: one n-cell, two parallel d-cells in every dimension d < n.
// Numbering: index 0 is the source copy, index 1 the target copy.
FiniteGlobularSet standard_globe(std::size_t n);

// The boundary n-sphere: two parallel (n-1)-cells and their boundaries;
// the 0-sphere is empty. Same numbering convention as the globe.
FiniteGlobularSet boundary_sphere(std::size_t n);

// Inclusion of the boundary sphere into the globe of the same dimension.
GlobularMap sphere_into_globe(std::size_t n);

FiniteGlobularSet disjoint_union(const FiniteGlobularSet& X, const FiniteGlobularSet& Y,
                                 GlobularMap* inl = nullptr, GlobularMap* inr = nullptr);

// Pushout X +_Z Y of f : Z -> X, g : Z -> Y, computed dimension-wise with a
// union-find quotient of the disjoint union. Cell numbering is deterministic:
// X's cells first (in order), then the Y cells not identified with any X cell.
// Throws PreconditionError if the induced boundaries conflict.
FiniteGlobularSet glue(const FiniteGlobularSet& X, const FiniteGlobularSet& Y,
                       const FiniteGlobularSet& Z, const GlobularMap& f, const GlobularMap& g,
                       GlobularMap* inl = nullptr, GlobularMap* inr = nullptr);

// All globular maps X -> Y in deterministic (lexicographic) order.
std::vector<GlobularMap> enumerate_globular_maps(const FiniteGlobularSet& X,
                                                 const FiniteGlobularSet& Y);
std::size_t hom_count(const FiniteGlobularSet& X, const FiniteGlobularSet& Y);

// Ordered pairs of parallel (n-1)-cells (all pairs of 0-cells when n = 1).
std::vector<std::pair<std::size_t, std::size_t>> parallel_pairs(const FiniteGlobularSet& X,
                                                                std::size_t n);

// Representability of parallel pairs by the boundary sphere: the map
// Hom(sphere(n), X) -> Par(X, n), f |-> (f(n-1,0), f(n-1,1)) is a bijection.
bool check_representability(const FiniteGlobularSet& X, std::size_t n);

// All valid globular sets with at most max_total cells and dimension at most
// max_dim, in deterministic order. Intended for exhaustive small sweeps.
std::vector<FiniteGlobularSet> enumerate_globular_sets(std::size_t max_total,
                                                       std::size_t max_dim);

std::string to_json(const FiniteGlobularSet& X);
FiniteGlobularSet globular_set_from_json(const std::string& text);

struct RepresentabilityReport {
  std::size_t sets_checked = 0;
  std::size_t squares_checked = 0;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

// Exhaustive representability sweep over all globular sets with at most
// max_total cells, checking every n in 1..max_n.
RepresentabilityReport run_representability_sweep(std::size_t max_total, std::size_t max_dim,
                                                  std::size_t max_n);

}  // namespace omega::globular
